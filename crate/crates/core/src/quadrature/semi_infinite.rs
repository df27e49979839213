use super::adaptive::integrate_with_breakpoints;
use super::{IntegralResult, QuadError, QuadratureConfig, TailPolicy};

const MAX_DOUBLINGS: usize = 80;

/// Integrates `f` over `[lo, inf)`, truncating according to `cfg.tail_policy`.
pub fn integrate_semi_infinite<F>(
    f: F,
    lo: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, QuadError>
where
    F: Fn(f64) -> f64,
{
    integrate_semi_infinite_with_breakpoints(f, lo, &[], cfg)
}

pub fn integrate_semi_infinite_with_breakpoints<F>(
    f: F,
    lo: f64,
    points: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, QuadError>
where
    F: Fn(f64) -> f64,
{
    cfg.validate()?;
    if !lo.is_finite() {
        return Err(QuadError::InvalidInterval { lo, hi: f64::INFINITY });
    }
    let last_point = points
        .iter()
        .copied()
        .filter(|p| p.is_finite() && *p > lo)
        .fold(lo, f64::max);
    let (cut, tail, tail_err) = match cfg.tail_policy {
        TailPolicy::ExponentialCut { threshold } => {
            let (cut, tail_err) = exponential_cut(&f, last_point, threshold, cfg.abs_tol)?;
            (cut, 0.0, tail_err)
        }
        TailPolicy::AlgebraicExtrapolate { exponent } => {
            algebraic_tail(&f, last_point, exponent, cfg.abs_tol)?
        }
    };
    let mut head_cfg = cfg.clone();
    head_cfg.abs_tol = (cfg.abs_tol - tail_err).max(0.5 * cfg.abs_tol);
    let head = integrate_with_breakpoints(&f, lo, cut.max(lo + f64::EPSILON), points, &head_cfg)?;
    let value = head.value + tail;
    let err = head.abs_error_estimate + tail_err;
    Ok(IntegralResult {
        value,
        abs_error_estimate: err,
        subdivisions_used: head.subdivisions_used,
        converged: head.converged && err <= cfg.target(value),
    })
}

/// Integrates over the whole real line as two semi-infinite pieces split at
/// zero (or at the single breakpoint nearest zero).
pub fn integrate_whole_line<F>(
    f: F,
    points: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, QuadError>
where
    F: Fn(f64) -> f64,
{
    let right_pts: Vec<f64> = points.iter().copied().filter(|p| *p > 0.0).collect();
    let left_pts: Vec<f64> = points.iter().filter(|p| **p < 0.0).map(|p| -p).collect();
    let right = integrate_semi_infinite_with_breakpoints(&f, 0.0, &right_pts, cfg)?;
    let left = integrate_semi_infinite_with_breakpoints(|x| f(-x), 0.0, &left_pts, cfg)?;
    Ok(right.combine(left))
}

fn exponential_cut<F>(f: &F, lo: f64, threshold: f64, abs_tol: f64) -> Result<(f64, f64), QuadError>
where
    F: Fn(f64) -> f64,
{
    let mut width = 1.0_f64.max(lo.abs() * 0.25);
    let mut start = lo + width;
    let mut previous = f64::INFINITY;
    for _ in 0..MAX_DOUBLINGS {
        let samples: Vec<f64> = (0..=4)
            .map(|j| f(start + width * j as f64 / 4.0).abs())
            .collect();
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(QuadError::TailFailure(format!(
                "integrand not finite near x = {start}"
            )));
        }
        let peak = samples.iter().copied().fold(0.0, f64::max);
        if peak <= threshold {
            let head = samples[0].max(samples[1]);
            let far = samples[3].max(samples[4]);
            let tail = if head == 0.0 {
                0.0
            } else if far < head {
                let decay_len = 0.75 * width / (head / far.max(f64::MIN_POSITIVE)).ln();
                head * decay_len.max(0.0)
            } else {
                head * width
            };
            if tail < 0.5 * abs_tol {
                return Ok((start, tail));
            }
        }
        if peak > previous * 1e6 && start > 1e3 {
            break;
        }
        previous = peak;
        start += width;
        width *= 2.0;
    }
    Err(QuadError::TailFailure(
        "integrand does not decay exponentially".into(),
    ))
}

fn algebraic_tail<F>(
    f: &F,
    lo: f64,
    exponent: f64,
    abs_tol: f64,
) -> Result<(f64, f64, f64), QuadError>
where
    F: Fn(f64) -> f64,
{
    let mut t = lo.max(0.0) + 1.0;
    for _ in 0..MAX_DOUBLINGS {
        let f1 = f(t);
        let f2 = f(2.0 * t);
        if !(f1.is_finite() && f2.is_finite()) {
            return Err(QuadError::TailFailure(format!("integrand not finite near x = {t}")));
        }
        if f1 == 0.0 && f2 == 0.0 {
            return Ok((t, 0.0, 0.0));
        }
        let local = (f1.abs() / f2.abs().max(f64::MIN_POSITIVE)).ln() / std::f64::consts::LN_2;
        if t > 64.0 * (1.0 + lo.abs()) && local < exponent - 0.5 {
            return Err(QuadError::TailFailure(format!(
                "integrand decays like x^-{local:.3}, slower than the declared x^-{exponent}"
            )));
        }
        let tail = f1 * t / (exponent - 1.0);
        let mismatch = (local - exponent).abs() / (exponent - 1.0);
        let err = tail.abs() * (mismatch.min(1.0) + 1e-6);
        if err < 0.5 * abs_tol {
            return Ok((t, tail, err));
        }
        t *= 2.0;
    }
    Err(QuadError::TailFailure(
        "algebraic tail did not become small enough".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_tail() {
        let cfg = QuadratureConfig::with_tolerances(1e-12, 1e-12);
        let r = integrate_semi_infinite(|x| (-x).exp(), 0.0, &cfg).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{r:?}");
        assert!(r.converged);
    }

    #[test]
    fn algebraic_tail_is_extrapolated() {
        let cfg = QuadratureConfig::with_tolerances(1e-10, 1e-10)
            .tail(TailPolicy::AlgebraicExtrapolate { exponent: 2.0 });
        let r = integrate_semi_infinite(|x| x.powi(-2), 1.0, &cfg).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn gaussian_half_line() {
        let cfg = QuadratureConfig::with_tolerances(1e-13, 1e-13);
        let r = integrate_semi_infinite(|x| (-x * x).exp(), 0.0, &cfg).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-10);
    }

    #[test]
    fn growing_integrand_fails_tail_check() {
        let cfg = QuadratureConfig::default();
        let r = integrate_semi_infinite(|x| (0.1 * x).exp(), 0.0, &cfg);
        assert!(matches!(r, Err(QuadError::TailFailure(_))));
    }

    #[test]
    fn slow_algebraic_decay_is_rejected() {
        let cfg = QuadratureConfig::default().tail(TailPolicy::AlgebraicExtrapolate { exponent: 3.0 });
        let r = integrate_semi_infinite(|x| 1.0 / (1.0 + x).powf(1.5), 0.0, &cfg);
        assert!(matches!(r, Err(QuadError::TailFailure(_))));
    }

    #[test]
    fn whole_line_gaussian() {
        let cfg = QuadratureConfig::with_tolerances(1e-13, 1e-13);
        let r = integrate_whole_line(|x| (-(x - 0.3) * (x - 0.3)).exp(), &[0.3], &cfg).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-11, "{r:?}");
    }
}
