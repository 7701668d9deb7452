use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::signals::Signal;
use crate::spectral::{centered_origin, cis_neg, physical_ft_onto, FftPlan, Grid2D, GridKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowShape {
    /// `exp(-pi (t / width)^2)`.
    Gaussian,
    /// `cos^2(pi t / width)` on `|t| < width / 2`.
    Hann,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub shape: WindowShape,
    pub width: f64,
    pub hop: usize,
}

impl WindowSpec {
    pub fn gaussian(width: f64, hop: usize) -> Self {
        WindowSpec { shape: WindowShape::Gaussian, width, hop }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self.shape {
            WindowShape::Gaussian => (-PI * (t / self.width).powi(2)).exp(),
            WindowShape::Hann => {
                if t.abs() < 0.5 * self.width {
                    (PI * t / self.width).cos().powi(2)
                } else {
                    0.0
                }
            }
        }
    }
}

/// Short-time Fourier transform
/// `V(x, w) = dt sum_j f[j] g(t_j - x) exp(-2 pi i t_j w)`
/// on frames `x_m = t0 + m hop dt` and frequencies `(k - N/2) / (N dt)`.
pub fn stft(f: &Signal, w: &WindowSpec) -> Result<Grid2D> {
    let n = f.len();
    let dt = f.dt();
    let span = n as f64 * dt;
    if !(w.width.is_finite() && w.width >= 2.0 * dt) {
        return Err(invalid(format!("window width {} is below two samples ({})", w.width, 2.0 * dt)));
    }
    if w.width > span {
        return Err(invalid(format!("window width {} exceeds the signal span {span}", w.width)));
    }
    if w.hop == 0 {
        return Err(invalid("hop must be at least one sample"));
    }
    let frames = n.div_ceil(w.hop);
    if frames < 2 {
        return Err(invalid(format!("hop {} leaves fewer than two frames", w.hop)));
    }
    let c = n / 2;
    let df = 1.0 / span;
    let w0 = centered_origin(n, df);
    let phase: Vec<Complex64> = (0..n).map(|k| cis_neg(f.t0() * (w0 + k as f64 * df)) * dt).collect();
    let plan = FftPlan::new(n);
    let mut data = vec![Complex64::new(0.0, 0.0); frames * n];
    data.par_chunks_mut(n).enumerate().for_each(|(m, row)| {
        let x = f.t0() + (m * w.hop) as f64 * dt;
        let mut buf: Vec<Complex64> =
            f.samples().iter().enumerate().map(|(j, v)| v * w.eval(f.time(j) - x)).collect();
        plan.forward(&mut buf);
        for (k, v) in row.iter_mut().enumerate() {
            *v = buf[(k + n - c) % n] * phase[k];
        }
    });
    Grid2D::new(
        [frames, n],
        [f.t0(), w0],
        [w.hop as f64 * dt, df],
        GridKind::TimeFrequency,
        data,
    )
}

/// Squared STFT magnitude.
pub fn spectrogram(f: &Signal, w: &WindowSpec) -> Result<Grid2D> {
    let v = stft(f, w)?;
    let data = v.data().iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)).collect();
    v.with_data(data)
}

/// Separable Gaussian window `exp(-pi ((u1/a1)^2 + (u2/a2)^2))` on a 2-D grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window2D {
    pub scale: [f64; 2],
}

/// Short-time Fourier transform of a 2-D grid at the lattice point `at`.
///
/// The `patch x patch` block of samples centred on `at` (wrapping
/// periodically) is windowed and transformed:
/// `V(u, z) = dx dy sum F(y) g(y - u) exp(-2 pi i y . z)`,
/// returned on the DC-centred frequency lattice with steps `1/(patch dx)`.
pub fn stft_2d(g: &Grid2D, window: &Window2D, at: [usize; 2], patch: usize) -> Result<Grid2D> {
    let [n0, n1] = g.shape();
    if patch < 2 || patch > n0.min(n1) {
        return Err(invalid(format!("patch size {patch} must lie in [2, {}]", n0.min(n1))));
    }
    if at[0] >= n0 || at[1] >= n1 {
        return Err(invalid(format!("position {at:?} lies outside the grid")));
    }
    if !window.scale.iter().all(|a| a.is_finite() && *a > 0.0) {
        return Err(invalid("window scales must be positive"));
    }
    let step = g.step();
    let half = (patch / 2) as isize;
    let u = [g.coord(0, at[0]), g.coord(1, at[1])];
    let w: [Vec<f64>; 2] = std::array::from_fn(|a| {
        (0..patch)
            .map(|j| {
                let d = (j as isize - half) as f64 * step[a] / window.scale[a];
                (-PI * d * d).exp()
            })
            .collect()
    });
    let mut data = Vec::with_capacity(patch * patch);
    for (a, wa) in w[0].iter().enumerate() {
        let i = (at[0] as isize + a as isize - half).rem_euclid(n0 as isize) as usize;
        let row = g.row(i);
        for (b, wb) in w[1].iter().enumerate() {
            let j = (at[1] as isize + b as isize - half).rem_euclid(n1 as isize) as usize;
            data.push(row[j] * (wa * wb));
        }
    }
    let origin = [u[0] - half as f64 * step[0], u[1] - half as f64 * step[1]];
    let block = Grid2D::new([patch, patch], origin, step, GridKind::Generic, data)?;
    let dual = block.dual_steps();
    let out_origin = [centered_origin(patch, dual[0]), centered_origin(patch, dual[1])];
    let cell = g.cell_area();
    let values = physical_ft_onto(&block, out_origin).into_iter().map(|v| v * cell).collect();
    Grid2D::new([patch, patch], out_origin, dual, GridKind::Generic, values)
}

/// [`stft_2d`] at many positions.
pub fn stft_2d_many(g: &Grid2D, window: &Window2D, at: &[[usize; 2]], patch: usize) -> Result<Vec<Grid2D>> {
    at.par_iter().map(|p| stft_2d(g, window, *p, patch)).collect()
}
