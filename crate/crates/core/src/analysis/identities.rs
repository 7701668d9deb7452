use super::report::{Metric, Report, Tolerance};
use crate::distributions::{cohen_from_wigner, wigner, CohenKernel};
use crate::error::{invalid, Result};
use crate::signals::Signal;
use crate::spectral::{Grid2D, GridKind};

/// Time and frequency marginals of a time-frequency grid (real parts,
/// Riemann sums with the grid steps).
pub fn marginals(q: &Grid2D) -> Result<(Vec<f64>, Vec<f64>)> {
    if q.kind() != GridKind::TimeFrequency {
        return Err(invalid(format!("marginals need a time-frequency grid, got {}", q.kind().as_str())));
    }
    let [n0, n1] = q.shape();
    let [dt, dw] = q.step();
    let time = (0..n0).map(|i| q.row(i).iter().map(|v| v.re).sum::<f64>() * dw).collect();
    let freq = (0..n1).map(|j| (0..n0).map(|i| q.get(i, j).re).sum::<f64>() * dt).collect();
    Ok((time, freq))
}

fn rel_l1(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
    let den: f64 = b.iter().map(|y| y.abs()).sum();
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// Relative L1 errors of `Q`'s marginals against `|f|^2` and `|f^(w)|^2`,
/// the spectrum being evaluated directly on `Q`'s frequency lattice.
pub fn marginal_errors(f: &Signal, q: &Grid2D) -> Result<(f64, f64)> {
    let (tm, fm) = marginals(q)?;
    let mut power: Vec<f64> = f.samples().iter().map(|v| v.norm_sqr()).collect();
    power.resize(tm.len(), 0.0);
    let spec = f.spectrum_at(&q.coords(1));
    let spower: Vec<f64> = spec.iter().map(|v| v.norm_sqr()).collect();
    Ok((rel_l1(&tm, &power), rel_l1(&fm, &spower)))
}

/// Marginal errors of every kernel in `kernels` on `f`, each bounded by 1%.
pub fn marginal_report(f: &Signal, kernels: &[CohenKernel]) -> Result<Report> {
    let w = wigner(f)?;
    let mut r = Report::new();
    for k in kernels {
        let q = cohen_from_wigner(&w, |a, b| k.phi(a * b))?;
        let (et, ef) = marginal_errors(f, &q)?;
        let label = super::kernel_label(k);
        r.insert(
            format!("marginal.{label}.time"),
            Metric::checked(et, Tolerance::below(0.01)).param("kernel", label.clone()).param("n", f.len()),
        );
        r.insert(
            format!("marginal.{label}.freq"),
            Metric::checked(ef, Tolerance::below(0.01)).param("kernel", label).param("n", f.len()),
        );
    }
    Ok(r)
}

/// `| ||Wf||_2 - ||f||_2^2 | / ||f||_2^2`, bounded by 1e-3.
pub fn moyal_check(f: &Signal) -> Result<Report> {
    let w = wigner(f)?;
    let nf = f.energy();
    let nw = w.l2_norm();
    let err = if nf == 0.0 { nw } else { (nw - nf).abs() / nf };
    let mut r = Report::new();
    r.insert(
        "moyal.relative_error",
        Metric::checked(err, Tolerance::below(1e-3))
            .param("norm_f_squared", nf)
            .param("norm_wigner", nw)
            .param("n", f.len())
            .param("dt", f.dt()),
    );
    Ok(r)
}
