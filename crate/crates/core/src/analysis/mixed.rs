//! Mixed time-frequency derivative of Born-Jordan distributions.
//!
//! `d^2/dx dw` acts on the symplectic side as the multiplier
//! `4 pi^2 z1 z2`. For Born-Jordan, `z1 z2 sinc(z1 z2) = sin(pi z1 z2) / pi`,
//! so the derivative of `Q` can also be obtained from the ambiguity function
//! with the bounded multiplier `4 pi sin(pi z1 z2)`. Both routes are computed.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::modnorm::modnorm_proxy;
use super::report::{Metric, Report, Tolerance};
use crate::distributions::{cohen_from_wigner, sin_pi, wigner, CohenKernel};
use crate::error::{invalid, Result};
use crate::signals::{synthesize, ComponentSpec, Signal, Timebase};
use crate::spectral::apply_multiplier;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedDerivative {
    /// `modnorm(D Q, inf, q) / modnorm(W, inf, q)`.
    pub r_q: f64,
    /// `modnorm(D W, inf, q) / modnorm(W, inf, q)`.
    pub r_w: f64,
    /// Relative max difference between the two routes to `D Q`.
    pub route_gap: f64,
}

pub fn mixed_derivative(f: &Signal, kernel: &CohenKernel, q: f64) -> Result<MixedDerivative> {
    if *kernel != CohenKernel::BornJordan {
        return Err(invalid(format!("mixed-derivative check needs the Born-Jordan kernel, got {}", kernel.name())));
    }
    let w = wigner(f)?;
    let qd = cohen_from_wigner(&w, |a, b| kernel.phi(a * b))?;
    let mixed = |a: f64, b: f64| Complex64::new(4.0 * PI * PI * a * b, 0.0);
    let dq = apply_multiplier(&qd, mixed)?;
    let dq_sin = apply_multiplier(&w, |a, b| Complex64::new(4.0 * PI * sin_pi(a * b), 0.0))?;
    let dw = apply_multiplier(&w, mixed)?;
    let nw = modnorm_proxy(&w, f64::INFINITY, q)?;
    Ok(MixedDerivative {
        r_q: modnorm_proxy(&dq, f64::INFINITY, q)? / nw,
        r_w: modnorm_proxy(&dw, f64::INFINITY, q)? / nw,
        route_gap: dq.rel_max_diff(&dq_sin),
    })
}

/// Derivative ratios of one signal plus the agreement of the two routes.
pub fn mixed_derivative_check(f: &Signal, kernel: &CohenKernel, q: f64) -> Result<Report> {
    let m = mixed_derivative(f, kernel, q)?;
    let mut r = Report::new();
    let tag = |x: Metric| x.param("q", q).param("n", f.len()).param("dt", f.dt());
    r.insert("mixed.r_q", tag(Metric::info(m.r_q)));
    r.insert("mixed.r_w", tag(Metric::info(m.r_w)));
    r.insert("mixed.route_agreement", tag(Metric::checked(m.route_gap, Tolerance::below(1e-8))));
    Ok(r)
}

/// Diagonal atom pair for the mixed-derivative experiment at a given extent:
/// `extent = 1` is 256 samples at `dt = 1/16`, `extent = 2` doubles the
/// sample rate and the frequency offset with it.
pub fn diagonal_pair(extent: usize) -> Result<Signal> {
    if extent == 0 {
        return Err(invalid("extent must be positive"));
    }
    let n = 256 * extent;
    let dt = 1.0 / (16.0 * extent as f64);
    let tb = Timebase::centered(n, dt)?;
    // a quarter of the alias-free frequency extent 1/(2 dt)
    let df = 1.0 / (8.0 * dt);
    let dtime = 4.0;
    synthesize(
        &tb,
        &[
            ComponentSpec::gabor(-dtime / 2.0, -df / 2.0, 1.0, 1.0),
            ComponentSpec::gabor(dtime / 2.0, df / 2.0, 1.0, 1.0),
        ],
    )
}

/// Compares the derivative ratios at two frequency extents: `r_Q` must grow
/// by less than 2x while `r_W` grows by at least 1.5x.
pub fn mixed_derivative_growth(base: &Signal, doubled: &Signal, kernel: &CohenKernel, q: f64) -> Result<Report> {
    let a = mixed_derivative(base, kernel, q)?;
    let b = mixed_derivative(doubled, kernel, q)?;
    let mut r = Report::new();
    for (tag, m, s) in [("1x", a, base), ("2x", b, doubled)] {
        let p = |x: Metric| x.param("n", s.len()).param("dt", s.dt()).param("q", q);
        r.insert(format!("mixed.{tag}.r_q"), p(Metric::info(m.r_q)));
        r.insert(format!("mixed.{tag}.r_w"), p(Metric::info(m.r_w)));
        r.insert(format!("mixed.{tag}.route_agreement"), p(Metric::checked(m.route_gap, Tolerance::below(1e-8))));
    }
    r.insert("mixed.growth.r_q", Metric::checked(b.r_q / a.r_q, Tolerance::below(2.0)).param("q", q));
    r.insert("mixed.growth.r_w", Metric::checked(b.r_w / a.r_w, Tolerance::above(1.5)).param("q", q));
    Ok(r)
}

/// The reference two-extent run on [`diagonal_pair`] signals.
pub fn mixed_derivative_experiment(q: f64) -> Result<Report> {
    mixed_derivative_growth(&diagonal_pair(1)?, &diagonal_pair(2)?, &CohenKernel::BornJordan, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn only_born_jordan_is_accepted() {
        let f = diagonal_pair(1).unwrap();
        assert!(mixed_derivative_check(&f, &CohenKernel::Wigner, 2.0).is_err());
    }

    #[test]
    fn routes_agree_on_a_small_signal() {
        let tb = Timebase::centered(128, 1.0 / 8.0).unwrap();
        let f = synthesize(&tb, &[ComponentSpec::gabor(-1.0, -1.0, 1.0, 1.0), ComponentSpec::gabor(1.0, 1.0, 1.0, 1.0)]).unwrap();
        let r = mixed_derivative_check(&f, &CohenKernel::BornJordan, 2.0).unwrap();
        assert!(r.passed(), "{}", r.to_json_string());
    }
}
