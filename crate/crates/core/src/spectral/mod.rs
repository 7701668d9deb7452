//! Discrete Fourier machinery: raw 1-D/2-D DFTs, the physically weighted
//! symplectic transform on uniform lattices, and Fourier multipliers.
//!
//! Sign convention throughout is `exp(-2 pi i x omega)` for forward
//! transforms. The symplectic transform of `F` on a lattice with spacings
//! `(dx, dw)` is
//!
//! ```text
//! G(z1, z2) = dx dw * sum F(x, w) exp(-2 pi i (x z2 - w z1))
//! ```
//!
//! evaluated on the dual lattice with spacings `(1/(N dw), 1/(N dx))`. The
//! phases use physical coordinates, so a second application landed back on
//! the original origin reproduces the input up to round-off.

mod fft;
mod grid;

pub use fft::{Direction, FftPlan, DIRECT_MAX};
pub use grid::{centered_origin, Grid2D, GridKind};

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{invalid, Result, TfqError};

/// Raw unnormalised DFT of a vector; the inverse carries the `1/N` factor.
pub fn dft_1d(v: &[Complex64], dir: Direction) -> Result<Vec<Complex64>> {
    if v.is_empty() {
        return Err(invalid("cannot transform an empty vector"));
    }
    let mut out = v.to_vec();
    FftPlan::new(v.len()).process(&mut out, dir);
    Ok(out)
}

/// `exp(-2 pi i t)` with `t` reduced to its fractional part first.
#[inline]
pub(crate) fn cis_neg(t: f64) -> Complex64 {
    let a = -2.0 * PI * (t - t.round());
    Complex64::new(a.cos(), a.sin())
}

fn transpose(data: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
    const B: usize = 32;
    for ib in (0..rows).step_by(B) {
        for jb in (0..cols).step_by(B) {
            for i in ib..(ib + B).min(rows) {
                for j in jb..(jb + B).min(cols) {
                    out[j * rows + i] = data[i * cols + j];
                }
            }
        }
    }
    out
}

fn transform_rows(data: &mut [Complex64], cols: usize, dir: Direction) {
    let plan = FftPlan::new(cols);
    data.par_chunks_mut(cols).for_each(|row| plan.process(row, dir));
}

/// Raw separable 2-D DFT of a row-major array, in place.
pub(crate) fn fft2_in_place(data: &mut Vec<Complex64>, shape: [usize; 2], dir: Direction) {
    transform_rows(data, shape[1], dir);
    let mut t = transpose(data, shape[0], shape[1]);
    transform_rows(&mut t, shape[0], dir);
    *data = transpose(&t, shape[1], shape[0]);
}

/// Raw 2-D DFT of the grid values in index order, as a numpy `fft2` would
/// compute it. The result lives on the dual lattice with origin zero; use
/// [`recenter`] to move DC to the middle.
pub fn dft_2d(g: &Grid2D, dir: Direction) -> Result<Grid2D> {
    let mut data = g.data().to_vec();
    fft2_in_place(&mut data, g.shape(), dir);
    Grid2D::new(g.shape(), [0.0, 0.0], g.dual_steps(), GridKind::Generic, data)
}

/// Rolls a periodic grid so that index `floor(N/2)` sits at coordinate 0.
pub fn recenter(g: &Grid2D) -> Grid2D {
    let [n0, n1] = g.shape();
    let (c0, c1) = (n0 / 2, n1 / 2);
    let mut data = vec![Complex64::new(0.0, 0.0); n0 * n1];
    for i in 0..n0 {
        let si = (i + n0 - c0) % n0;
        for j in 0..n1 {
            let sj = (j + n1 - c1) % n1;
            data[i * n1 + j] = g.get(si, sj);
        }
    }
    let step = g.step();
    Grid2D::new(
        g.shape(),
        [centered_origin(n0, step[0]), centered_origin(n1, step[1])],
        step,
        g.kind(),
        data,
    )
    .expect("recentred lattice inherits a valid shape")
}

/// Exact 2-D Fourier sum from `g`'s physical lattice onto the dual lattice
/// starting at `out_origin`:
/// `H[p, q] = sum F[n, k] exp(-2 pi i (x_n xi_p + w_k eta_q))`.
pub(crate) fn physical_ft_onto(g: &Grid2D, out_origin: [f64; 2]) -> Vec<Complex64> {
    let shape = g.shape();
    let step = g.step();
    let origin = g.origin();
    let dual = g.dual_steps();

    let pre: [Vec<Complex64>; 2] = std::array::from_fn(|a| {
        let t = step[a] * out_origin[a];
        (0..shape[a]).map(|n| cis_neg(n as f64 * t)).collect()
    });
    let post: [Vec<Complex64>; 2] = std::array::from_fn(|a| {
        (0..shape[a])
            .map(|p| cis_neg(origin[a] * (out_origin[a] + p as f64 * dual[a])))
            .collect()
    });

    let mut data = g.data().to_vec();
    data.par_chunks_mut(shape[1]).enumerate().for_each(|(n, row)| {
        for (k, v) in row.iter_mut().enumerate() {
            *v *= pre[0][n] * pre[1][k];
        }
    });
    fft2_in_place(&mut data, shape, Direction::Forward);
    data.par_chunks_mut(shape[1]).enumerate().for_each(|(p, row)| {
        for (q, v) in row.iter_mut().enumerate() {
            *v *= post[0][p] * post[1][q];
        }
    });
    data
}

/// Symplectic Fourier transform landed on the lattice whose first point is
/// `origin = (zeta1_0, zeta2_0)`.
pub fn symplectic_dft_onto(g: &Grid2D, origin: [f64; 2]) -> Result<Grid2D> {
    let [n0, n1] = g.shape();
    if n0 != n1 {
        return Err(invalid(format!("symplectic transform needs a square grid, got {n0}x{n1}")));
    }
    let n = n0;
    let dual = g.dual_steps();
    // output axis 0 is zeta1 (dual to omega), axis 1 is zeta2 (dual to x)
    let s1 = dual[1];
    let s2 = dual[0];
    let eta0 = -origin[0] - (n - 1) as f64 * s1;
    let h = physical_ft_onto(g, [origin[1], eta0]);
    let cell = g.cell_area();
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    out.par_chunks_mut(n).enumerate().for_each(|(l, row)| {
        let q = n - 1 - l;
        for (m, v) in row.iter_mut().enumerate() {
            *v = h[m * n + q] * cell;
        }
    });
    Grid2D::new([n, n], origin, [s1, s2], g.kind().symplectic_dual(), out)
}

/// Symplectic Fourier transform onto the DC-centred dual lattice.
pub fn symplectic_dft(g: &Grid2D) -> Result<Grid2D> {
    let [n0, n1] = g.shape();
    let dual = g.dual_steps();
    let origin = [centered_origin(n1, dual[1]), centered_origin(n0, dual[0])];
    symplectic_dft_onto(g, origin)
}

/// Multiplies the symplectic spectrum of `g` by `m(zeta1, zeta2)` and
/// transforms back onto `g`'s own lattice.
pub fn apply_multiplier<M>(g: &Grid2D, m: M) -> Result<Grid2D>
where
    M: Fn(f64, f64) -> Complex64 + Sync,
{
    let mut spec = symplectic_dft(g)?;
    multiply_in_place(&mut spec, m)?;
    let mut back = symplectic_dft_onto(&spec, g.origin())?;
    back.set_kind(g.kind());
    Ok(back)
}

/// Pointwise `G(z1, z2) *= m(z1, z2)` over the lattice. Fails if `m` is
/// not finite at some lattice point.
pub fn multiply_in_place<M>(g: &mut Grid2D, m: M) -> Result<()>
where
    M: Fn(f64, f64) -> Complex64 + Sync,
{
    let xs = g.coords(0);
    let ys = g.coords(1);
    let n1 = g.shape()[1];
    let bad = g
        .data_mut()
        .par_chunks_mut(n1)
        .enumerate()
        .map(|(i, row)| {
            let mut bad = None;
            for (j, v) in row.iter_mut().enumerate() {
                let mv = m(xs[i], ys[j]);
                if !(mv.re.is_finite() && mv.im.is_finite()) && bad.is_none() {
                    bad = Some((xs[i], ys[j]));
                }
                *v *= mv;
            }
            bad
        })
        .find_first(|b| b.is_some())
        .flatten();
    match bad {
        Some((a, b)) => Err(TfqError::Numeric(format!("multiplier is not finite at ({a}, {b})"))),
        None => Ok(()),
    }
}
