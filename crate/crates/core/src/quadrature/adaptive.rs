use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::oscillatory::phase_crossings;
use super::rule::{gk21, Panel};
use super::{Compensated, IntegralResult, QuadError, QuadValue, QuadratureConfig};

/// Integrates `f` over `[lo, hi]` with globally adaptive bisection.
pub fn integrate_adaptive<F>(
    f: F,
    lo: f64,
    hi: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, QuadError>
where
    F: Fn(f64) -> f64,
{
    integrate_with_breakpoints(f, lo, hi, &[], cfg)
}

/// As [`integrate_adaptive`], but no panel ever straddles one of `points`.
/// Points outside `(lo, hi)` are ignored.
pub fn integrate_with_breakpoints<F>(
    f: F,
    lo: f64,
    hi: f64,
    points: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, QuadError>
where
    F: Fn(f64) -> f64,
{
    let mut pts: Vec<f64> = points.to_vec();
    if let Some(phase) = &cfg.oscillation_hint {
        if lo < hi {
            pts.extend(phase_crossings(phase.as_ref(), lo, hi)?);
        }
    }
    let mut g = |x: f64| f(x);
    let (value, err, subdivisions, converged) = integrate_generic(&mut g, lo, hi, &pts, cfg)?;
    Ok(IntegralResult {
        value,
        abs_error_estimate: err,
        subdivisions_used: subdivisions,
        converged,
    })
}

struct HeapEntry {
    error: f64,
    index: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.index.cmp(&self.index))
    }
}

/// Core adaptive loop shared by the real and complex front ends.
/// Returns (value, error estimate, bisections, converged).
pub(crate) fn integrate_generic<T, F>(
    f: &mut F,
    lo: f64,
    hi: f64,
    points: &[f64],
    cfg: &QuadratureConfig,
) -> Result<(T, f64, usize, bool), QuadError>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    cfg.validate()?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(QuadError::InvalidInterval { lo, hi });
    }

    let mut edges: Vec<f64> = points
        .iter()
        .copied()
        .filter(|p| p.is_finite() && *p > lo && *p < hi)
        .collect();
    edges.push(lo);
    edges.push(hi);
    edges.sort_by(f64::total_cmp);
    edges.dedup();

    let mut panels: Vec<Panel<T>> = Vec::with_capacity(edges.len() + 64);
    let mut heap = BinaryHeap::new();
    let mut total = T::default();
    let mut total_err = 0.0;
    for w in edges.windows(2) {
        let p = gk21(f, w[0], w[1])?;
        total = total + p.value;
        total_err += p.error;
        heap.push(HeapEntry {
            error: p.error,
            index: panels.len(),
        });
        panels.push(p);
    }

    let mut subdivisions = 0;
    while total_err > cfg.target(total.norm()) && subdivisions < cfg.max_subdivisions {
        let Some(entry) = heap.pop() else { break };
        let worst = panels[entry.index];
        let mid = 0.5 * (worst.lo + worst.hi);
        // Panel is at the resolution limit of f64; leave it as is.
        if !(mid > worst.lo && mid < worst.hi)
            || (worst.hi - worst.lo) <= 64.0 * f64::EPSILON * worst.lo.abs().max(worst.hi.abs())
        {
            continue;
        }
        let left = gk21(f, worst.lo, mid)?;
        let right = gk21(f, mid, worst.hi)?;
        total = total - worst.value + left.value + right.value;
        total_err += left.error + right.error - worst.error;
        panels[entry.index] = left;
        heap.push(HeapEntry {
            error: left.error,
            index: entry.index,
        });
        heap.push(HeapEntry {
            error: right.error,
            index: panels.len(),
        });
        panels.push(right);
        subdivisions += 1;
    }

    panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut acc = Compensated::default();
    let mut err = 0.0;
    for p in &panels {
        acc.add(p.value);
        err += p.error;
    }
    let value = acc.value();
    let converged = err <= cfg.target(value.norm());
    Ok((value, err, subdivisions, converged))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::with_tolerances(1e-13, 1e-13)
    }

    #[test]
    fn polynomial_is_exact() {
        let r = integrate_adaptive(|x| x * x, 0.0, 1.0, &cfg()).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-12);
        assert!(r.converged);
    }

    #[test]
    fn sine_over_half_period() {
        let r = integrate_adaptive(f64::sin, 0.0, PI, &cfg()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn kink_with_breakpoint() {
        let r =
            integrate_with_breakpoints(|x| (x - 0.5).abs(), 0.0, 1.0, &[0.5], &cfg()).unwrap();
        assert!((r.value - 0.25).abs() < 1e-12);
        assert_eq!(r.subdivisions_used, 0);
    }

    #[test]
    fn jump_without_breakpoint_still_converges() {
        let step = |x: f64| if x < 0.3 { 1.0 } else { 0.0 };
        let c = QuadratureConfig::with_tolerances(1e-9, 1e-9);
        let r = integrate_adaptive(step, 0.0, 1.0, &c).unwrap();
        assert!((r.value - 0.3).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn rejects_bad_interval_and_config() {
        assert!(matches!(
            integrate_adaptive(|x| x, 1.0, 0.0, &cfg()),
            Err(QuadError::InvalidInterval { .. })
        ));
        let mut bad = cfg();
        bad.max_subdivisions = 0;
        assert!(matches!(
            integrate_adaptive(|x| x, 0.0, 1.0, &bad),
            Err(QuadError::InvalidConfig(_))
        ));
    }

    #[test]
    fn nan_integrand_is_reported() {
        let r = integrate_adaptive(|x| if x > 0.5 { f64::NAN } else { 1.0 }, 0.0, 1.0, &cfg());
        assert!(matches!(r, Err(QuadError::NonFiniteIntegrand { .. })));
    }

    #[test]
    fn exhausting_subdivisions_is_not_an_error() {
        let c = QuadratureConfig::with_tolerances(1e-15, 1e-15).subdivisions(3);
        let r = integrate_adaptive(|x| (50.0 * x).sin() / x.sqrt(), 1e-9, 1.0, &c).unwrap();
        assert!(!r.converged);
        assert_eq!(r.subdivisions_used, 3);
    }

    #[test]
    fn integrable_endpoint_singularity() {
        let c = QuadratureConfig::with_tolerances(1e-11, 1e-11).subdivisions(2000);
        let r = integrate_adaptive(|x| 1.0 / x.sqrt(), 0.0, 1.0, &c).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9, "{r:?}");
    }
}
