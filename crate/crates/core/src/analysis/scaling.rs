//! Dilation experiments: how mixed-norm proxies of Gaussians and of their
//! time-frequency distributions scale with the dilation factor.

use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::decay::fit_loglog;
use super::modnorm::modnorm_proxy;
use super::report::{Metric, Report, Tolerance};
use crate::distributions::{cohen_from_wigner, wigner, CohenKernel};
use crate::error::{invalid, Result, TfqError};
use crate::signals::{synth_gabor, ComponentSpec, Timebase};
use crate::spectral::{centered_origin, Grid2D, GridKind};

/// Timebase used when none is given: 512 samples at `dt = 1/64`.
pub fn default_scaling_timebase() -> Timebase {
    Timebase::centered(512, 1.0 / 64.0).expect("valid default timebase")
}

fn fmt_lambda(l: f64) -> String {
    format!("{l}")
}

fn check_lambdas(tb: &Timebase, lambdas: &[f64]) -> Result<()> {
    if lambdas.len() < 3 {
        return Err(TfqError::InsufficientPoints { needed: 3, got: lambdas.len() });
    }
    let span = tb.n as f64 * tb.dt;
    for &l in lambdas {
        if !(l >= 1.0 && l.is_finite()) {
            return Err(invalid(format!("dilation {l} must be >= 1")));
        }
        if l * tb.dt > 0.125 {
            return Err(invalid(format!("dilation {l} is not resolved: lambda dt = {} > 1/8", l * tb.dt)));
        }
        if 8.0 / l > span {
            return Err(invalid(format!("dilated Gaussian with lambda = {l} does not fit in the window")));
        }
    }
    Ok(())
}

/// Slopes of `log modnorm(W phi_l)` and `log modnorm(Q phi_l)` against
/// `log l` for `phi_l(x) = exp(-pi l^2 x^2)`, on the default timebase.
pub fn scaling_slope_experiment(p: f64, q: f64, lambdas: &[f64], kernel: &CohenKernel) -> Result<Report> {
    scaling_slope_experiment_on(&default_scaling_timebase(), p, q, lambdas, kernel)
}

pub fn scaling_slope_experiment_on(
    tb: &Timebase,
    p: f64,
    q: f64,
    lambdas: &[f64],
    kernel: &CohenKernel,
) -> Result<Report> {
    check_lambdas(tb, lambdas)?;
    let expected = -2.0 + 1.0 / p + 1.0 / q;
    let label = super::kernel_label(kernel);
    let mut report = Report::new();
    let mut nw = Vec::new();
    let mut nq = Vec::new();
    for &l in lambdas {
        let f = synth_gabor(tb, &ComponentSpec::gabor(0.0, 0.0, 1.0 / l, 1.0))?;
        let w = wigner(&f)?;
        let qd = cohen_from_wigner(&w, |a, b| kernel.phi(a * b))?;
        let a = modnorm_proxy(&w, p, q)?;
        let b = modnorm_proxy(&qd, p, q)?;
        let exact = FRAC_1_SQRT_2 / l;
        report.insert(
            format!("scaling.wigner.l2[lambda={}]", fmt_lambda(l)),
            Metric::checked(w.l2_norm(), Tolerance::relative(exact, 0.02)).param("lambda", l).param("exact", exact),
        );
        report.insert(format!("scaling.wigner.proxy[lambda={}]", fmt_lambda(l)), Metric::info(a).param("lambda", l));
        report.insert(format!("scaling.{label}.proxy[lambda={}]", fmt_lambda(l)), Metric::info(b).param("lambda", l));
        nw.push(a);
        nq.push(b);
    }
    let fw = fit_loglog(lambdas, &nw)?;
    let fq = fit_loglog(lambdas, &nq)?;
    let params = |m: Metric, fit: &super::decay::SlopeFit| {
        m.param("p", p)
            .param("q", q)
            .param("lambdas", lambdas.to_vec())
            .param("expected", expected)
            .param("residual", fit.residual)
            .param("n", tb.n)
            .param("dt", tb.dt)
    };
    report.insert("scaling.wigner.slope", params(Metric::checked(fw.exponent, Tolerance::within(expected, 0.15)), &fw));
    report.insert(
        format!("scaling.{label}.slope"),
        params(Metric::checked(fq.exponent, Tolerance::within(expected, 0.15)), &fq).param("kernel", label.clone()),
    );
    report.insert(
        "scaling.slope_difference",
        Metric::checked(fq.exponent - fw.exponent, Tolerance::within(0.0, 0.15)).param("kernel", label),
    );
    Ok(report)
}

/// Slope of `log modnorm(phi(l .))` against `log l` for the 2-D Gaussian
/// `phi(z) = exp(-pi |z|^2)` on a `512 x 512` grid with step `1/64`.
/// The expected asymptotic slope is `-2 (1 - 1/q)`; the band is 10% of it,
/// or 0.1 absolute when it is zero.
pub fn dilation_slope(p: f64, q: f64, lambdas: &[f64]) -> Result<Report> {
    let n = 512;
    let h = 1.0 / 64.0;
    let tb = Timebase::centered(n, h)?;
    check_lambdas(&tb, lambdas)?;
    let o = centered_origin(n, h);
    let mut norms = Vec::new();
    for &l in lambdas {
        let g = Grid2D::from_fn([n, n], [o, o], [h, h], GridKind::Generic, |x, w| {
            Complex64::new((-PI * l * l * (x * x + w * w)).exp(), 0.0)
        })?;
        norms.push(modnorm_proxy(&g, p, q)?);
    }
    let fit = fit_loglog(lambdas, &norms)?;
    let expected = -2.0 * (1.0 - 1.0 / q);
    let band = if expected == 0.0 { 0.1 } else { 0.1 * expected.abs() };
    let mut r = Report::new();
    r.insert(
        "dilation.slope",
        Metric::checked(fit.exponent, Tolerance::within(expected, band))
            .param("p", p)
            .param("q", q)
            .param("lambdas", lambdas.to_vec())
            .param("norms", norms)
            .param("expected", expected)
            .param("residual", fit.residual),
    );
    Ok(r)
}
