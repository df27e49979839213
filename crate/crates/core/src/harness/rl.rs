use serde::Serialize;

use crate::asymptotics::{phase, PhaseSpec};
use crate::kernels::oracle::integrate_fallible;
use crate::kernels::KernelError;
use crate::quadrature::QuadratureConfig;

use super::catalog::TestFunction;
use super::{march, tidy, HarnessError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RlWave {
    Sin,
    Cos,
}

/// Phase of the oscillating factor g(x, R).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RlPhase {
    /// R x.
    Linear,
    /// A family phase zeta(x, R).
    Family(PhaseSpec),
}

impl RlPhase {
    fn eval(&self, x: f64, r: f64) -> Result<f64, HarnessError> {
        match self {
            RlPhase::Linear => Ok(r * x),
            RlPhase::Family(spec) => Ok(phase(*spec, x, r)?),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RlRow {
    pub cutoff: f64,
    pub value: f64,
    pub abs_error_estimate: f64,
}

/// int psi(x) g(x, R) dx over `interval` for each R, with g the sine or
/// cosine of the phase.
pub fn riemann_lebesgue_check(
    wave: RlWave,
    phase_kind: RlPhase,
    psi: &TestFunction,
    interval: (f64, f64),
    r_list: &[f64],
) -> Result<Vec<RlRow>, HarnessError> {
    let lo = interval.0.max(psi.domain.0).max(psi.effective.0);
    let hi = interval.1.min(psi.domain.1).min(psi.effective.1);
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(HarnessError::Domain(format!(
            "interval [{}, {}] gives no finite range for {}",
            interval.0, interval.1, psi.id
        )));
    }
    if r_list.is_empty() {
        return Err(HarnessError::Domain("cutoff list is empty".into()));
    }
    let cfg = QuadratureConfig::with_tolerances(1e-13, 1e-10).subdivisions(200_000);
    let mut rows = Vec::with_capacity(r_list.len());
    for &r in r_list {
        let zeta = |x: f64| phase_kind.eval(x, r);
        let rate = |x: f64| {
            let h = 1e-6 * x.abs().max(1.0);
            match (zeta(x + h), zeta(x - h)) {
                (Ok(p), Ok(m)) => ((p - m) / (2.0 * h)).abs(),
                _ => 1.0,
            }
        };
        let mut pts = march(lo, hi, rate)?;
        pts.extend(psi.breakpoints.iter().copied());
        let pts = tidy(pts, lo, hi);
        let g = |x: f64| -> Result<f64, KernelError> {
            let p = zeta(x).map_err(|e| KernelError::Domain(e.to_string()))?;
            let s = match wave {
                RlWave::Sin => p.sin(),
                RlWave::Cos => p.cos(),
            };
            Ok(psi.eval(x) * s)
        };
        let res = integrate_fallible(g, lo, hi, &pts, &cfg)?;
        rows.push(RlRow {
            cutoff: r,
            value: res.value,
            abs_error_estimate: res.abs_error_estimate,
        });
    }
    Ok(rows)
}
