//! Convergence experiments: a catalog of test functions whose integrability
//! flags are certified numerically, runners that integrate kernels against
//! them over a ladder of cutoffs, and the pass/fail suites shared by the
//! `selftest` command and the acceptance tests.

mod catalog;
mod convergence;
mod rl;
pub mod suites;

use thiserror::Error;

use crate::asymptotics::AsymptoticError;
use crate::kernels::KernelError;

pub use catalog::{catalog, lookup, lookup_spherical, spherical_catalog, Flag, Piece, SphericalFunction, TestFunction};
pub use convergence::{
    classical_mass, default_config, required_flags, run_convergence, run_series_convergence,
    run_spherical_convergence, weber_scale, ConvergenceRecord,
};
pub use rl::{riemann_lebesgue_check, RlPhase, RlRow, RlWave};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invalid experiment: {0}")]
    Domain(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Asymptotic(#[from] AsymptoticError),
}

/// Breakpoints from `lo` to `hi` spaced a quarter period apart under the
/// local angular rate `rate(x)`.
pub(crate) fn march(lo: f64, hi: f64, rate: impl Fn(f64) -> f64) -> Result<Vec<f64>, HarnessError> {
    const LIMIT: usize = 2_000_000;
    let mut pts = Vec::new();
    let mut x = lo;
    loop {
        let w = rate(x).max(1.0);
        x += std::f64::consts::FRAC_PI_2 / w;
        if x >= hi {
            return Ok(pts);
        }
        pts.push(x);
        if pts.len() > LIMIT {
            return Err(HarnessError::Domain(format!(
                "oscillation grid on [{lo}, {hi}] exceeds {LIMIT} panels"
            )));
        }
    }
}

/// Sorts, drops points outside (lo, hi) and merges near-duplicates.
pub(crate) fn tidy(mut pts: Vec<f64>, lo: f64, hi: f64) -> Vec<f64> {
    pts.retain(|p| p.is_finite() && *p > lo && *p < hi);
    pts.sort_by(f64::total_cmp);
    let scale = 1e-13 * (hi - lo).abs().max(1.0);
    pts.dedup_by(|b, a| (*b - *a).abs() <= scale);
    pts
}
