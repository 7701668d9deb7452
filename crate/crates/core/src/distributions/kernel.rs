use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Result, TfqError};

/// `sin(pi x)`, exactly zero at every integer.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round(); // r in [-1, 1]
    if r == r.trunc() {
        return 0.0;
    }
    let (s, a) = if r < 0.0 { (-1.0, -r) } else { (1.0, r) };
    let a = if a > 0.5 { 1.0 - a } else { a };
    s * (PI * a).sin()
}

/// `sin(pi u) / (pi u)` with the value 1 at `u = 0`.
pub fn sinc(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        sin_pi(u) / (PI * u)
    }
}

/// Piecewise-linear `Phi(u)` through strictly increasing nodes. A table
/// whose first node is `u = 0` describes an even function and is mirrored
/// onto negative `u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiTable {
    u: Vec<f64>,
    phi: Vec<f64>,
}

impl PhiTable {
    /// The table must contain `u = 0` in its range with `Phi(0) = 1`.
    pub fn new(u: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        if u.len() < 2 || u.len() != phi.len() {
            return Err(invalid("phi table needs at least two (u, phi) nodes"));
        }
        if u.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("phi table nodes must be strictly increasing"));
        }
        if u.iter().chain(&phi).any(|v| !v.is_finite()) {
            return Err(invalid("phi table entries must be finite"));
        }
        let t = PhiTable { u, phi };
        let at0 = t.interp(0.0)?;
        if (at0 - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("kernel must satisfy Phi(0) = 1, table gives {at0}")));
        }
        Ok(t)
    }

    /// Tabulates `phi` at `n` equispaced nodes on `[-u_max, u_max]`.
    pub fn sample(u_max: f64, n: usize, phi: impl Fn(f64) -> f64) -> Result<Self> {
        if !(u_max > 0.0) || n < 3 {
            return Err(invalid("phi table needs u_max > 0 and at least 3 nodes"));
        }
        let u: Vec<f64> = (0..n).map(|i| -u_max + 2.0 * u_max * i as f64 / (n - 1) as f64).collect();
        let vals = u.iter().map(|&x| phi(x)).collect();
        PhiTable::new(u, vals)
    }

    pub fn range(&self) -> (f64, f64) {
        (self.u[0], self.u[self.u.len() - 1])
    }

    pub fn interp(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.range();
        let x = if lo == 0.0 { x.abs() } else { x };
        if !(x >= lo && x <= hi) {
            return Err(TfqError::Extrapolation { u: x, lo, hi });
        }
        let i = match self.u.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => return Ok(self.phi[i]),
            Err(i) => i,
        };
        let (u0, u1) = (self.u[i - 1], self.u[i]);
        let t = (x - u0) / (u1 - u0);
        Ok(self.phi[i - 1] + t * (self.phi[i] - self.phi[i - 1]))
    }
}

/// Cohen kernels of product type, `Theta(z1, z2) = Phi(z1 z2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CohenKernel {
    Wigner,
    BornJordan,
    ChoiWilliams { sigma: f64 },
    Product(PhiTable),
}

impl CohenKernel {
    pub fn choi_williams(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(invalid(format!("Choi-Williams sigma must be positive, got {sigma}")));
        }
        Ok(CohenKernel::ChoiWilliams { sigma })
    }

    /// Short name used in reports and on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            CohenKernel::Wigner => "wigner",
            CohenKernel::BornJordan => "bj",
            CohenKernel::ChoiWilliams { .. } => "cw",
            CohenKernel::Product(_) => "product",
        }
    }

    pub fn phi(&self, u: f64) -> Result<f64> {
        if u == 0.0 {
            return Ok(1.0);
        }
        Ok(match self {
            CohenKernel::Wigner => 1.0,
            CohenKernel::BornJordan => sinc(u),
            CohenKernel::ChoiWilliams { sigma } => (-u * u / sigma).exp(),
            CohenKernel::Product(t) => t.interp(u)?,
        })
    }
}

pub fn kernel_eval(k: &CohenKernel, z1: f64, z2: f64) -> Result<f64> {
    k.phi(z1 * z2)
}
