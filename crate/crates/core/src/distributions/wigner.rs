use num_complex::Complex64;
use rayon::prelude::*;

use super::kernel::CohenKernel;
use crate::error::{invalid, Result, TfqError};
use crate::signals::Signal;
use crate::spectral::{centered_origin, cis_neg, symplectic_dft, symplectic_dft_onto, FftPlan, Grid2D, GridKind};

fn even_samples(f: &Signal) -> Result<Vec<Complex64>> {
    if f.len() < 4 {
        return Err(invalid(format!("Wigner transform needs at least 4 samples, got {}", f.len())));
    }
    let mut s = f.samples().to_vec();
    if s.len() % 2 == 1 {
        s.push(Complex64::new(0.0, 0.0));
    }
    Ok(s)
}

/// Discrete Wigner distribution on an `N x N` lattice.
///
/// `W[n, k] = 2 dt sum_m f[n+m] conj(f[n-m]) exp(-2 pi i m (k - N/2) / N)`,
/// i.e. time step `dt` and frequency step `1/(2 N dt)`. Only the band
/// `|w| < 1/(4 dt)` is alias free. Odd-length input is padded by one zero.
pub fn wigner(f: &Signal) -> Result<Grid2D> {
    wigner_at(f, 0.0)
}

/// [`wigner`] on the frequency band of width `1/(2 dt)` centred at `center`.
///
/// The discrete distribution is periodic in frequency with period
/// `1/(2 dt)`, so this only moves the window: the result equals the Wigner
/// grid of `f exp(-2 pi i center t)` with its frequency origin shifted by
/// `center`. A signal is alias free when its spectrum lies within the band.
pub fn wigner_at(f: &Signal, center: f64) -> Result<Grid2D> {
    if !center.is_finite() {
        return Err(invalid(format!("band centre must be finite, got {center}")));
    }
    let s = even_samples(f)?;
    let n = s.len();
    let c = n / 2;
    let dt = f.dt();
    let plan = FftPlan::new(n);
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    data.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        let mut lag = vec![Complex64::new(0.0, 0.0); n];
        let mmax = i.min(n - 1 - i).min(c - 1);
        for m in 0..=mmax {
            let mut r = s[i + m] * s[i - m].conj();
            if center != 0.0 {
                r *= cis_neg(2.0 * center * m as f64 * dt);
            }
            lag[m] = r;
            if m > 0 {
                lag[n - m] = r.conj();
            }
        }
        plan.forward(&mut lag);
        for (k, v) in row.iter_mut().enumerate() {
            *v = lag[(k + n - c) % n] * (2.0 * dt);
        }
    });
    let dw = 1.0 / (2.0 * n as f64 * dt);
    Grid2D::new([n, n], [f.t0(), center + centered_origin(n, dw)], [dt, dw], GridKind::TimeFrequency, data)
}

/// Ambiguity function as the symplectic transform of the Wigner grid, on the
/// lattice `zeta1 = 2 dt (l - N/2)`, `zeta2 = (q - N/2) / (N dt)`.
pub fn ambiguity(f: &Signal) -> Result<Grid2D> {
    symplectic_dft(&wigner(f)?)
}

/// Ambiguity by direct evaluation of the lag-product integral
/// `A(z1, z2) = dt sum_n f[n+m] conj(f[n-m]) exp(-2 pi i t_n z2)`, `z1 = 2 m dt`.
/// O(N^3); independent of the FFT path.
pub fn ambiguity_direct(f: &Signal) -> Result<Grid2D> {
    let s = even_samples(f)?;
    let n = s.len();
    let c = n / 2;
    let dt = f.dt();
    let s1 = 2.0 * dt;
    let s2 = 1.0 / (n as f64 * dt);
    let origin = [centered_origin(n, s1), centered_origin(n, s2)];
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    data.par_chunks_mut(n).enumerate().for_each(|(l, row)| {
        let m = l as isize - c as isize;
        let ma = m.unsigned_abs();
        let lo = ma;
        let hi = n.saturating_sub(ma);
        for (q, v) in row.iter_mut().enumerate() {
            let z2 = origin[1] + q as f64 * s2;
            let mut acc = Complex64::new(0.0, 0.0);
            for i in lo..hi {
                let p = s[(i as isize + m) as usize] * s[(i as isize - m) as usize].conj();
                acc += p * cis_neg(f.time(i) * z2);
            }
            *v = acc * dt;
        }
    });
    Grid2D::new([n, n], origin, [s1, s2], GridKind::DelayDoppler, data)
}

/// Samples `theta` at every lattice point of `a` and multiplies in place.
fn weight_ambiguity<T>(a: &mut Grid2D, theta: T) -> Result<()>
where
    T: Fn(f64, f64) -> Result<f64> + Sync,
{
    let xs = a.coords(0);
    let ys = a.coords(1);
    let n1 = a.shape()[1];
    a.data_mut()
        .par_chunks_mut(n1)
        .enumerate()
        .map(|(i, row)| {
            for (j, v) in row.iter_mut().enumerate() {
                let t = theta(xs[i], ys[j])?;
                if !t.is_finite() {
                    return Err(TfqError::Numeric(format!(
                        "kernel is not finite at ({}, {})",
                        xs[i], ys[j]
                    )));
                }
                *v *= t;
            }
            Ok(())
        })
        .collect::<Result<Vec<()>>>()?;
    Ok(())
}

/// Cohen-class distribution from a precomputed Wigner grid, through
/// `Q = F_sigma(Theta * F_sigma W)` landed back on `w`'s lattice.
pub fn cohen_from_wigner<T>(w: &Grid2D, theta: T) -> Result<Grid2D>
where
    T: Fn(f64, f64) -> Result<f64> + Sync,
{
    let mut a = symplectic_dft(w)?;
    weight_ambiguity(&mut a, theta)?;
    let mut q = symplectic_dft_onto(&a, w.origin())?;
    q.set_kind(GridKind::TimeFrequency);
    Ok(q)
}

pub fn cohen(f: &Signal, k: &CohenKernel) -> Result<Grid2D> {
    cohen_from_wigner(&wigner(f)?, |z1, z2| k.phi(z1 * z2))
}

/// Cohen-class distribution for an arbitrary real kernel `Theta(z1, z2)`.
/// Unlike [`CohenKernel`], no normalisation is enforced.
pub fn cohen_with<T>(f: &Signal, theta: T) -> Result<Grid2D>
where
    T: Fn(f64, f64) -> f64 + Sync,
{
    cohen_from_wigner(&wigner(f)?, |z1, z2| Ok(theta(z1, z2)))
}
