//! Quantitative checks on time-frequency distributions: marginals, Moyal's
//! identity, cross-term attenuation, directional decay, modulation-norm
//! proxies and dilation scaling.

mod decay;
mod identities;
mod interference;
mod mixed;
mod modnorm;
mod report;
mod scaling;

pub use decay::{directional_decay, fit_line, fit_loglog, raised_cosine, ConeSpec, SlopeFit, DEFAULT_HALF_ANGLE};
pub use identities::{marginal_errors, marginal_report, marginals, moyal_check};
pub use interference::{auto_term_spread, interference_report, pair_geometry, region_mass, PairGeometry, Region};
pub use mixed::{
    diagonal_pair, mixed_derivative, mixed_derivative_check, mixed_derivative_experiment, mixed_derivative_growth,
    MixedDerivative,
};
pub use modnorm::{modnorm_proxy, modnorm_proxy_with, ModNormConfig};
pub use report::{Metric, Report, Tolerance};
pub use scaling::{default_scaling_timebase, dilation_slope, scaling_slope_experiment, scaling_slope_experiment_on};

use crate::distributions::CohenKernel;

/// Name used for a kernel in metric keys.
pub fn kernel_label(k: &CohenKernel) -> String {
    match k {
        CohenKernel::ChoiWilliams { sigma } => format!("cw[sigma={sigma}]"),
        other => other.name().to_string(),
    }
}
