//! Directional Fourier-decay probe.
//!
//! A raised-cosine bump localises `G` around a point of the time-frequency
//! plane; the 2-D DFT of the product is sampled on dyadic shells inside a
//! two-sided cone, and `log E_j` is fitted against `log rho_j`. Directions
//! and radii are measured in dual-lattice steps (index units).

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{invalid, Result, TfqError};
use crate::spectral::{dft_2d, recenter, Direction, Grid2D};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeFit {
    pub exponent: f64,
    pub residual: f64,
    pub points: Vec<(f64, f64)>,
}

/// Least-squares line through `(x, y)` points; returns slope and RMS residual.
pub fn fit_line(points: &[(f64, f64)]) -> Result<SlopeFit> {
    if points.len() < 3 {
        return Err(TfqError::InsufficientPoints { needed: 3, got: points.len() });
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(TfqError::Numeric("non-finite point in slope fit".into()));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(invalid("slope fit needs distinct abscissae"));
    }
    let slope = sxy / sxx;
    let icept = my - slope * mx;
    let rss: f64 = points.iter().map(|p| (p.1 - icept - slope * p.0).powi(2)).sum();
    Ok(SlopeFit { exponent: slope, residual: (rss / n).sqrt(), points: points.to_vec() })
}

/// Fit of `log y` against `log x`.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Result<SlopeFit> {
    if xs.iter().chain(ys).any(|v| !(*v > 0.0)) {
        return Err(TfqError::Numeric("log-log fit needs positive values".into()));
    }
    let pts: Vec<(f64, f64)> = xs.iter().zip(ys).map(|(x, y)| (x.ln(), y.ln())).collect();
    fit_line(&pts)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConeSpec {
    /// Base point `(x, omega)` in physical units.
    pub center: (f64, f64),
    /// Unit direction in the dual plane.
    pub direction: (f64, f64),
    pub half_angle: f64,
    /// Inner radii of the shells `[rho_j, 2 rho_j)`, in dual-lattice steps.
    pub shells: Vec<f64>,
}

pub const DEFAULT_HALF_ANGLE: f64 = PI / 8.0;

impl ConeSpec {
    pub fn new(center: (f64, f64), direction: (f64, f64), half_angle: f64, shells: Vec<f64>) -> Result<Self> {
        let norm = direction.0.hypot(direction.1);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(invalid("cone direction must be nonzero"));
        }
        if !(half_angle > 0.0 && half_angle < PI / 2.0) {
            return Err(invalid(format!("cone half-angle {half_angle} must lie in (0, pi/2)")));
        }
        if shells.is_empty() || shells[0] <= 0.0 || shells.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("shell radii must be positive and strictly increasing"));
        }
        Ok(ConeSpec {
            center,
            direction: (direction.0 / norm, direction.1 / norm),
            half_angle,
            shells,
        })
    }

    /// Shells `4, 8, 16, ...` dual steps, the last one ending at the Nyquist
    /// radius of `grid`, with the default half-angle.
    pub fn dyadic(grid: &Grid2D, center: (f64, f64), direction: (f64, f64)) -> Result<Self> {
        let nyq = nyquist_radius(grid);
        let mut shells = Vec::new();
        let mut rho = 4.0;
        while 2.0 * rho <= nyq {
            shells.push(rho);
            rho *= 2.0;
        }
        ConeSpec::new(center, direction, DEFAULT_HALF_ANGLE, shells)
    }
}

fn nyquist_radius(g: &Grid2D) -> f64 {
    let [n0, n1] = g.shape();
    (n0.min(n1) / 2) as f64
}

/// `1/2 (1 + cos(pi r / w))` for `r < w`.
pub fn raised_cosine(r: f64, w: f64) -> f64 {
    if r < w {
        0.5 * (1.0 + (PI * r / w).cos())
    } else {
        0.0
    }
}

/// Fits the shell-wise decay of the localised spectrum of `g`. `E_j` is the
/// `L^q` mean of `|F|` over shell `j` inside the cone (`q = inf` takes the
/// maximum).
pub fn directional_decay(g: &Grid2D, cone: &ConeSpec, cutoff_width: f64, q: f64) -> Result<SlopeFit> {
    if !(q >= 1.0) {
        return Err(invalid(format!("norm exponent must be >= 1, got {q}")));
    }
    if !(cutoff_width > 0.0) {
        return Err(invalid("cutoff width must be positive"));
    }
    let nyq = nyquist_radius(g);
    if let Some(&last) = cone.shells.last() {
        if 2.0 * last > nyq {
            return Err(invalid(format!("shell [{last}, {}) exceeds the Nyquist radius {nyq}", 2.0 * last)));
        }
    }
    let [n0, n1] = g.shape();
    let (cx, cw) = cone.center;
    let lo = [g.coord(0, 0), g.coord(1, 0)];
    let hi = [g.coord(0, n0 - 1), g.coord(1, n1 - 1)];
    if cx - cutoff_width < lo[0] || cx + cutoff_width > hi[0] || cw - cutoff_width < lo[1] || cw + cutoff_width > hi[1] {
        return Err(invalid("cutoff bump does not fit inside the grid"));
    }

    let mut local = g.clone();
    let xs = g.coords(0);
    let ws = g.coords(1);
    for (i, &x) in xs.iter().enumerate() {
        for (j, &w) in ws.iter().enumerate() {
            let r = (x - cx).hypot(w - cw);
            let v = local.get(i, j) * raised_cosine(r, cutoff_width);
            local.set(i, j, v);
        }
    }
    let spec = recenter(&dft_2d(&local, Direction::Forward)?);
    let cell = g.cell_area();
    let (c0, c1) = (n0 / 2, n1 / 2);
    let cos_half = cone.half_angle.cos();
    let (d0, d1) = cone.direction;

    let mut rhos = Vec::new();
    let mut energies = Vec::new();
    for &rho in &cone.shells {
        let mut count = 0usize;
        let mut acc = 0.0f64;
        for p in 0..n0 {
            let k0 = p as f64 - c0 as f64;
            for r in 0..n1 {
                let k1 = r as f64 - c1 as f64;
                let rad = k0.hypot(k1);
                if rad < rho || rad >= 2.0 * rho {
                    continue;
                }
                if (k0 * d0 + k1 * d1).abs() < cos_half * rad {
                    continue;
                }
                let v = spec.get(p, r).norm() * cell;
                count += 1;
                if q.is_infinite() {
                    acc = acc.max(v);
                } else {
                    acc += v.powf(q);
                }
            }
        }
        if count == 0 {
            return Err(TfqError::InsufficientResolution(format!(
                "shell [{rho}, {}) contains no lattice point inside the cone",
                2.0 * rho
            )));
        }
        let e = if q.is_infinite() { acc } else { (acc / count as f64).powf(1.0 / q) };
        rhos.push(rho);
        energies.push(e);
    }
    fit_loglog(&rhos, &energies)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{centered_origin, GridKind};
    use num_complex::Complex64;

    fn gaussian(n: usize, h: f64) -> Grid2D {
        let o = centered_origin(n, h);
        Grid2D::from_fn([n, n], [o, o], [h, h], GridKind::TimeFrequency, |x, w| {
            Complex64::new((-PI * (x * x + w * w)).exp(), 0.0)
        })
        .unwrap()
    }

    #[test]
    fn line_fit_recovers_slope() {
        let f = fit_loglog(&[1.0, 2.0, 4.0, 8.0], &[3.0, 0.75, 0.1875, 0.046875]).unwrap();
        assert!((f.exponent + 2.0).abs() < 1e-12);
        assert!(f.residual < 1e-12);
        assert!(matches!(fit_line(&[(0.0, 1.0), (1.0, 2.0)]), Err(TfqError::InsufficientPoints { .. })));
    }

    #[test]
    fn smooth_gaussian_decays_fast() {
        let g = gaussian(256, 1.0 / 16.0);
        for dir in [(1.0, 0.0), (1.0, 1.0), (0.3, -1.0)] {
            let cone = ConeSpec::dyadic(&g, (0.0, 0.0), dir).unwrap();
            for q in [2.0, f64::INFINITY] {
                let fit = directional_decay(&g, &cone, 3.0, q).unwrap();
                assert!(fit.exponent <= -4.0, "{dir:?} q={q}: {}", fit.exponent);
            }
        }
    }

    #[test]
    fn exponent_ignores_scale() {
        let g = gaussian(128, 1.0 / 8.0);
        let cone = ConeSpec::dyadic(&g, (0.5, 0.0), (1.0, 1.0)).unwrap();
        let a = directional_decay(&g, &cone, 2.0, 2.0).unwrap();
        let b = directional_decay(&g.scaled(Complex64::new(-3.5, 1.0)), &cone, 2.0, 2.0).unwrap();
        assert!((a.exponent - b.exponent).abs() < 1e-10);
    }

    #[test]
    fn probe_preconditions() {
        let g = gaussian(64, 1.0 / 8.0);
        assert!(ConeSpec::new((0.0, 0.0), (0.0, 0.0), 0.3, vec![4.0]).is_err());
        assert!(ConeSpec::new((0.0, 0.0), (1.0, 0.0), 0.3, vec![4.0, 4.0]).is_err());
        let too_far = ConeSpec::new((0.0, 0.0), (1.0, 0.0), 0.3, vec![4.0, 8.0, 32.0]).unwrap();
        assert!(directional_decay(&g, &too_far, 1.0, 2.0).is_err());
        let cone = ConeSpec::dyadic(&g, (3.5, 0.0), (1.0, 0.0)).unwrap();
        assert!(directional_decay(&g, &cone, 1.0, 2.0).is_err());
        // a needle-thin cone misses every lattice point of the first shell
        let thin = ConeSpec::new((0.0, 0.0), (1.0, 0.37), 1e-4, vec![1.0, 2.0, 4.0]).unwrap();
        assert!(matches!(
            directional_decay(&g, &thin, 1.0, 2.0),
            Err(TfqError::InsufficientResolution(_))
        ));
    }
}
