use std::f64::consts::PI;

use super::adaptive::integrate_generic;
use super::{IntegralResult, QuadError, QuadratureConfig};

const MONOTONE_SAMPLES: usize = 129;
const MAX_CROSSINGS: usize = 500_000;

/// Points in `(lo, hi)` where `phase` crosses an integer multiple of pi.
///
/// The phase must be strictly increasing on `[lo, hi]`; this is checked on a
/// sample grid and on the located crossings.
pub fn phase_crossings<P>(phase: &P, lo: f64, hi: f64) -> Result<Vec<f64>, QuadError>
where
    P: Fn(f64) -> f64 + ?Sized,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(QuadError::InvalidInterval { lo, hi });
    }
    let grid: Vec<f64> = (0..MONOTONE_SAMPLES)
        .map(|i| {
            if i + 1 == MONOTONE_SAMPLES {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (MONOTONE_SAMPLES - 1) as f64
            }
        })
        .collect();
    let values: Vec<f64> = grid.iter().map(|&x| phase(x)).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(QuadError::PartitionFailure("phase is not finite".into()));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(QuadError::PartitionFailure(format!(
            "phase is not strictly increasing on [{lo}, {hi}]"
        )));
    }

    let first = (values[0] / PI).floor() as i64 + 1;
    let last = (values[MONOTONE_SAMPLES - 1] / PI).ceil() as i64 - 1;
    if last < first {
        return Ok(Vec::new());
    }
    if (last - first) as usize >= MAX_CROSSINGS {
        return Err(QuadError::PartitionFailure(format!(
            "too many phase crossings ({})",
            last - first + 1
        )));
    }

    let mut out = Vec::with_capacity((last - first + 1) as usize);
    let mut cell = 0;
    for m in first..=last {
        let level = m as f64 * PI;
        while values[cell + 1] < level {
            cell += 1;
        }
        let mut a = grid[cell];
        let mut fa = values[cell] - level;
        if let Some(&prev) = out.last() {
            if prev > a {
                a = prev;
                fa = phase(a) - level;
            }
        }
        let root = illinois(phase, level, a, fa, grid[cell + 1], values[cell + 1] - level);
        if let Some(&prev) = out.last() {
            if root <= prev {
                return Err(QuadError::PartitionFailure(
                    "phase crossings are not increasing".into(),
                ));
            }
        }
        out.push(root);
    }
    Ok(out)
}

fn illinois<P>(phase: &P, level: f64, mut a: f64, mut fa: f64, mut b: f64, mut fb: f64) -> f64
where
    P: Fn(f64) -> f64 + ?Sized,
{
    if fa >= 0.0 {
        return a;
    }
    if fb <= 0.0 {
        return b;
    }
    let mut side = 0;
    for _ in 0..200 {
        if (b - a) <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1e-300) {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !(c > a && c < b) {
            c = 0.5 * (a + b);
        }
        let fc = phase(c) - level;
        if fc == 0.0 {
            return c;
        }
        if fc < 0.0 {
            a = c;
            fa = fc;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    0.5 * (a + b)
}

/// Integrates an oscillatory `f` by splitting `[lo, hi]` at every point where
/// `phase` crosses a multiple of pi and integrating each arch adaptively.
pub fn integrate_oscillatory<F, P>(
    f: F,
    lo: f64,
    hi: f64,
    phase: P,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, QuadError>
where
    F: Fn(f64) -> f64,
    P: Fn(f64) -> f64,
{
    let arches = phase_crossings(&phase, lo, hi)?;
    let mut g = |x: f64| f(x);
    let (value, err, subdivisions, converged) =
        integrate_generic(&mut g, lo, hi, &arches, cfg)?;
    Ok(IntegralResult {
        value,
        abs_error_estimate: err,
        subdivisions_used: subdivisions,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossings_of_linear_phase() {
        let c = phase_crossings(&|t: f64| t, 0.0, 10.0).unwrap();
        assert_eq!(c.len(), 3);
        for (i, x) in c.iter().enumerate() {
            assert!((x - (i + 1) as f64 * PI).abs() < 1e-13);
        }
    }

    #[test]
    fn non_monotone_phase_is_rejected() {
        let r = phase_crossings(&|t: f64| (t - 1.0).powi(2), 0.0, 3.0);
        assert!(matches!(r, Err(QuadError::PartitionFailure(_))));
    }

    #[test]
    fn whole_arches_cancel() {
        let cfg = QuadratureConfig::with_tolerances(1e-12, 1e-12);
        let r = integrate_oscillatory(f64::sin, 0.0, 20.0 * PI, |t| t, &cfg).unwrap();
        assert!(r.value.abs() < 1e-10, "{r:?}");
    }
}
