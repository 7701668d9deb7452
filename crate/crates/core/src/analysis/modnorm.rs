//! Discrete mixed-norm proxy for modulation-space norms of a 2-D grid.
//!
//! The grid is analysed with a Gaussian window on a coarse Gabor lattice and
//! `( sum_xi ( sum_x |V G(x, xi)|^p dx )^(q/p) dxi )^(1/q)` is returned. With
//! `p = q = 2` the result approximates the physical `L2` norm of `G`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::spectral::{fft2_in_place, Direction, Grid2D};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModNormConfig {
    /// Window scale in samples: `g[i, j] = exp(-pi (i^2 + j^2) / L^2)`.
    pub window_samples: f64,
    /// Position hop in samples along both axes.
    pub hop: usize,
    /// Side of the analysed block (FFT size).
    pub patch: usize,
}

impl Default for ModNormConfig {
    fn default() -> Self {
        ModNormConfig { window_samples: 8.0, hop: 4, patch: 32 }
    }
}

fn check_exponent(name: &str, e: f64) -> Result<()> {
    if e >= 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("exponent {name} = {e} must lie in [1, inf]")))
    }
}

pub fn modnorm_proxy(g: &Grid2D, p: f64, q: f64) -> Result<f64> {
    modnorm_proxy_with(g, p, q, &ModNormConfig::default())
}

pub fn modnorm_proxy_with(g: &Grid2D, p: f64, q: f64, cfg: &ModNormConfig) -> Result<f64> {
    check_exponent("p", p)?;
    check_exponent("q", q)?;
    let [n0, n1] = g.shape();
    let m = cfg.patch.min(n0).min(n1);
    if m < 2 || cfg.hop == 0 || !(cfg.window_samples > 0.0) {
        return Err(invalid("modulation-norm lattice needs patch >= 2, hop >= 1 and a positive window"));
    }
    let step = g.step();
    let cell = g.cell_area();
    let half = (m / 2) as isize;

    let mut window: Vec<f64> = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            let (i, j) = ((a as isize - half) as f64, (b as isize - half) as f64);
            window.push((-std::f64::consts::PI * (i * i + j * j) / cfg.window_samples.powi(2)).exp());
        }
    }
    let wnorm = (window.iter().map(|v| v * v).sum::<f64>() * cell).sqrt();
    for v in window.iter_mut() {
        *v /= wnorm;
    }

    let rows: Vec<usize> = (0..n0).step_by(cfg.hop).collect();
    let cols: Vec<usize> = (0..n1).step_by(cfg.hop).collect();
    let data = g.data();
    // per position-row partial sums over positions, one value per frequency
    let partials: Vec<Vec<f64>> = rows
        .par_iter()
        .map(|&a0| {
            let mut acc = vec![0.0f64; m * m];
            let mut buf = vec![Complex64::new(0.0, 0.0); m * m];
            for &b0 in &cols {
                for a in 0..m {
                    let i = (a0 as isize + a as isize - half).rem_euclid(n0 as isize) as usize;
                    for b in 0..m {
                        let j = (b0 as isize + b as isize - half).rem_euclid(n1 as isize) as usize;
                        buf[a * m + b] = data[i * n1 + j] * window[a * m + b];
                    }
                }
                let mut v = std::mem::take(&mut buf);
                fft2_in_place(&mut v, [m, m], Direction::Forward);
                for (s, z) in acc.iter_mut().zip(&v) {
                    let mag = z.norm() * cell;
                    if p.is_infinite() {
                        *s = s.max(mag);
                    } else {
                        *s += mag.powf(p);
                    }
                }
                buf = v;
            }
            acc
        })
        .collect();

    let mut inner = vec![0.0f64; m * m];
    for part in &partials {
        for (s, v) in inner.iter_mut().zip(part) {
            if p.is_infinite() {
                *s = s.max(*v);
            } else {
                *s += v;
            }
        }
    }
    let dz = cfg.hop as f64 * step[0] * cfg.hop as f64 * step[1];
    let dxi = 1.0 / (m as f64 * step[0] * m as f64 * step[1]);
    if !p.is_infinite() {
        for s in inner.iter_mut() {
            *s = (*s * dz).powf(1.0 / p);
        }
    }
    let out = if q.is_infinite() {
        inner.iter().cloned().fold(0.0, f64::max)
    } else {
        (inner.iter().map(|v| v.powf(q)).sum::<f64>() * dxi).powf(1.0 / q)
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{centered_origin, GridKind};
    use rand::{Rng, SeedableRng};

    fn random_grid(n: usize, h: [f64; 2], seed: u64) -> Grid2D {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let data = (0..n * n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        Grid2D::new([n, n], [0.0, 0.0], h, GridKind::Generic, data).unwrap()
    }

    #[test]
    fn l2_case_matches_the_grid_norm() {
        for (seed, h) in [(1, [0.1, 0.1]), (2, [1.0 / 32.0, 1.0 / 8.0])] {
            let g = random_grid(64, h, seed);
            let r = modnorm_proxy(&g, 2.0, 2.0).unwrap() / g.l2_norm();
            assert!((r - 1.0).abs() < 0.02, "ratio {r}");
        }
        let h = 1.0 / 16.0;
        let o = centered_origin(128, h);
        let gauss = Grid2D::from_fn([128, 128], [o, o], [h, h], GridKind::Generic, |x, w| {
            Complex64::new((-std::f64::consts::PI * (x * x + 2.0 * w * w)).exp(), 0.0)
        })
        .unwrap();
        let r = modnorm_proxy(&gauss, 2.0, 2.0).unwrap() / gauss.l2_norm();
        assert!((r - 1.0).abs() < 0.02, "ratio {r}");
    }

    #[test]
    fn proxy_is_homogeneous() {
        let g = random_grid(48, [0.2, 0.2], 3);
        for (p, q) in [(2.0, 2.0), (1.0, f64::INFINITY), (f64::INFINITY, 1.5)] {
            let a = modnorm_proxy(&g, p, q).unwrap();
            let b = modnorm_proxy(&g.scaled(Complex64::new(0.0, -2.5)), p, q).unwrap();
            assert!((b / a - 2.5).abs() < 1e-10);
        }
    }

    #[test]
    fn exponents_are_validated() {
        let g = random_grid(16, [1.0, 1.0], 4);
        assert!(modnorm_proxy(&g, 0.5, 2.0).is_err());
        assert!(modnorm_proxy(&g, 2.0, f64::NAN).is_err());
    }
}
