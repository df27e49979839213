use std::f64::consts::PI;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::kernels::oracle::{integrate_fallible, integrate_guarded};
use crate::kernels::{Anchor, Cutoff, Family, Kernel, KernelSpec};
use crate::quadrature::{
    integrate_semi_infinite_with_breakpoints, integrate_with_breakpoints, IntegralResult,
    QuadratureConfig, TailPolicy,
};
use crate::specfun::WEBER_A_MAX;

use super::catalog::{Flag, SphericalFunction, TestFunction};
use super::{march, tidy, HarnessError};

/// One rung of a convergence ladder.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRecord {
    pub kernel: KernelSpec,
    pub test_function_id: String,
    pub anchor: Anchor,
    pub cutoff: Cutoff,
    pub computed: f64,
    pub target: f64,
    pub abs_error: f64,
    #[serde(skip)]
    pub wall_time: Duration,
    pub quadrature_error: f64,
    pub converged: bool,
    /// Set when the rung could not be computed; `computed` is NaN then.
    pub failure: Option<String>,
}

impl ConvergenceRecord {
    fn new(kernel: KernelSpec, id: &str, target: f64, started: Instant) -> Self {
        ConvergenceRecord {
            kernel,
            test_function_id: id.to_string(),
            anchor: kernel.anchor,
            cutoff: kernel.cutoff,
            computed: f64::NAN,
            target,
            abs_error: f64::NAN,
            wall_time: started.elapsed(),
            quadrature_error: f64::NAN,
            converged: false,
            failure: None,
        }
    }

    fn settle(mut self, outcome: Result<IntegralResult, HarnessError>, scale: f64, started: Instant) -> Self {
        match outcome {
            Ok(r) => {
                self.computed = r.value / scale;
                self.abs_error = (self.computed - self.target).abs();
                self.quadrature_error = r.abs_error_estimate / scale;
                self.converged = r.converged;
                if !r.converged {
                    self.failure = Some(format!(
                        "quadrature did not converge (error estimate {:.2e})",
                        self.quadrature_error
                    ));
                }
            }
            Err(e) => self.failure = Some(e.to_string()),
        }
        self.wall_time = started.elapsed();
        self
    }
}

/// Tolerances used by the convergence runners unless overridden.
pub fn default_config() -> QuadratureConfig {
    QuadratureConfig::with_tolerances(1e-9, 1e-9).subdivisions(400_000)
}

/// Normalization that maps the Weber integral onto the half-sum target:
/// 2 pi sqrt(1 + e^(2 pi a)).
pub fn weber_scale(a: f64) -> f64 {
    2.0 * PI * (1.0 + (2.0 * PI * a).exp()).sqrt()
}

/// Flags a test function must carry before it may be integrated against
/// the given family.
pub fn required_flags(family: &Family) -> Vec<Flag> {
    match *family {
        Family::BesselHankel { nu } if nu >= -0.5 => vec![Flag::Thm1I, Flag::Thm1II],
        Family::BesselHankel { .. } => vec![Flag::Thm1I, Flag::Thm1IIPrime],
        Family::Coulomb { .. } => vec![Flag::Thm2],
        Family::Airy => vec![Flag::Thm3],
        Family::Weber => vec![Flag::Thm4],
        _ => Vec::new(),
    }
}

/// Angular rate of the kernel's oscillation in the integration variable.
fn local_rate(family: &Family, r: f64, x: f64) -> f64 {
    match family {
        Family::BesselHankel { .. } | Family::ClassicalCauchy | Family::ClassicalSinc => r,
        Family::Coulomb { .. } => r / (2.0 * (x.max(0.0) + 1.0 / (r * r)).sqrt()),
        Family::Airy => (r + x).max(0.0).sqrt(),
        Family::Weber => r.ln().max(0.0) + 2.0,
        Family::ClassicalGaussian => r.sqrt(),
        _ => 1.0,
    }
}

fn oscillates(family: &Family) -> bool {
    family.is_integral() || matches!(family, Family::ClassicalSinc)
}

fn check_ladder(cutoffs: &[f64]) -> Result<(), HarnessError> {
    if cutoffs.is_empty() {
        return Err(HarnessError::Domain("cutoff list is empty".into()));
    }
    if cutoffs.iter().any(|c| !(c.is_finite() && *c > 0.0)) {
        return Err(HarnessError::Domain(format!("cutoffs must be positive, got {cutoffs:?}")));
    }
    if cutoffs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(HarnessError::Domain(format!("cutoffs must increase strictly, got {cutoffs:?}")));
    }
    Ok(())
}

/// Weighted mass of a Weber test function beyond the supported |b| <= 5.
fn weber_leak(tf: &TestFunction) -> f64 {
    let cfg = QuadratureConfig::with_tolerances(1e-14, 1e-10).subdivisions(20_000);
    let side = |lo: f64, hi: f64, w: &dyn Fn(f64) -> f64| {
        if hi <= lo {
            return 0.0;
        }
        integrate_with_breakpoints(|x| w(x) * tf.eval(x).abs(), lo, hi, &tf.breakpoints, &cfg)
            .map_or(f64::INFINITY, |r| r.value)
    };
    let right = side(WEBER_A_MAX, tf.effective.1, &|x| (1.25 * PI * x).exp() / x);
    let left = side(tf.effective.0, -WEBER_A_MAX, &|x| (0.25 * PI * x.abs()).exp() / x.abs());
    right + left
}

/// Integrates delta_R(x, a) phi(x) over the theorem's interval for each
/// cutoff. Rungs that fail numerically are kept, with `failure` set.
pub fn run_convergence(
    family: Family,
    tf: &TestFunction,
    a: f64,
    cutoffs: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<ConvergenceRecord>, HarnessError> {
    if family.is_series() {
        return Err(HarnessError::Domain(format!(
            "{family} is a series family; use run_series_convergence"
        )));
    }
    check_ladder(cutoffs)?;
    let missing: Vec<&str> = required_flags(&family)
        .into_iter()
        .filter(|f| !tf.has(*f))
        .map(|f| f.name())
        .collect();
    if !missing.is_empty() {
        return Err(HarnessError::Hypothesis(format!(
            "{} lacks {} required by the {} kernel",
            tf.id,
            missing.join(", "),
            family.name()
        )));
    }
    if !(a > tf.domain.0 && a < tf.domain.1) {
        return Err(HarnessError::Domain(format!("anchor {a} is not interior to the domain of {}", tf.id)));
    }
    let half_line = matches!(family, Family::BesselHankel { .. } | Family::Coulomb { .. });
    let mut lo = tf.domain.0.max(tf.effective.0);
    let mut hi = tf.domain.1.min(tf.effective.1);
    if half_line {
        lo = lo.max(0.0);
    }
    if family == Family::Weber {
        let leak = weber_leak(tf);
        if !(leak <= 1e-9) {
            return Err(HarnessError::Hypothesis(format!(
                "{} has weighted mass {leak:.2e} beyond |b| = {WEBER_A_MAX}",
                tf.id
            )));
        }
        lo = lo.max(-WEBER_A_MAX);
        hi = hi.min(WEBER_A_MAX);
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(HarnessError::Domain(format!("{} has no finite truncation range", tf.id)));
    }
    let target = tf.half_sum(a);
    let scale = if family == Family::Weber { weber_scale(a) } else { 1.0 };

    let mut out = Vec::with_capacity(cutoffs.len());
    for &r in cutoffs {
        let started = Instant::now();
        let spec = KernelSpec::new(family, Cutoff::R(r), Anchor::Point(a));
        let outcome = (|| {
            let kernel = Kernel::new(spec)?;
            let mut pts = tf.breakpoints.clone();
            pts.push(a);
            if oscillates(&family) {
                pts.extend(march(lo, hi, |x| local_rate(&family, r, x))?);
            }
            let w = local_rate(&family, r, a).max(1.0);
            let width = PI / (4.0 * w);
            pts.extend((-40..=40).map(|k| a + k as f64 * width));
            let pts = tidy(pts, lo, hi);
            let mut local = cfg.clone();
            local.max_subdivisions = local.max_subdivisions.max(4 * (pts.len() + 1));
            let f = |x: f64| Ok(kernel.eval(x)?.value * tf.eval(x));
            Ok(integrate_guarded(f, lo, hi, &pts, &local)?)
        })();
        out.push(ConvergenceRecord::new(spec, tf.id, target, started).settle(outcome, scale, started));
    }
    Ok(out)
}

/// Weighted L2 norm squared of f for a series family, or an error when it is
/// not finite.
fn weighted_norm(family: &Family, tf: &TestFunction) -> Result<f64, HarnessError> {
    let cfg = QuadratureConfig::with_tolerances(1e-12, 1e-10).subdivisions(50_000);
    let fail = |why: String| HarnessError::Hypothesis(format!("{} is not square-integrable: {why}", tf.id));
    let pts = &tf.breakpoints;
    let r = match *family {
        Family::LegendreSeries => integrate_with_breakpoints(|t| tf.eval(t).powi(2), -1.0, 1.0, pts, &cfg),
        Family::HermiteSeries => {
            let right: Vec<f64> = pts.iter().copied().filter(|p| *p > 0.0).collect();
            let left: Vec<f64> = pts.iter().filter(|p| **p < 0.0).map(|p| -p).collect();
            let g = |t: f64| (-t * t).exp() * tf.eval(t).powi(2);
            integrate_semi_infinite_with_breakpoints(g, 0.0, &right, &cfg).and_then(|r| {
                integrate_semi_infinite_with_breakpoints(|t| g(-t), 0.0, &left, &cfg).map(|l| r.combine(l))
            })
        }
        Family::LaguerreSeries { alpha } => {
            let g = |t: f64| (alpha * t.ln() - t).exp() * tf.eval(t).powi(2);
            let mut p = pts.clone();
            p.push(1.0);
            integrate_semi_infinite_with_breakpoints(g, 0.0, &tidy(p, 0.0, f64::INFINITY), &cfg)
        }
        _ => return Err(HarnessError::Domain(format!("{family} is not a one-variable series family"))),
    }
    .map_err(|e| fail(e.to_string()))?;
    if r.value.is_finite() && r.converged {
        Ok(r.value)
    } else {
        Err(fail(format!("estimate {} did not settle", r.value)))
    }
}

/// Integrates delta_n(t, x) f(t) over the family's interval for each order.
pub fn run_series_convergence(
    family: Family,
    tf: &TestFunction,
    x: f64,
    orders: &[usize],
    cfg: &QuadratureConfig,
) -> Result<Vec<ConvergenceRecord>, HarnessError> {
    let interval = match family {
        Family::LegendreSeries => (-1.0, 1.0),
        Family::HermiteSeries => (f64::NEG_INFINITY, f64::INFINITY),
        Family::LaguerreSeries { .. } => (0.0, f64::INFINITY),
        _ => return Err(HarnessError::Domain(format!("{family} is not a one-variable series family"))),
    };
    if orders.is_empty() {
        return Err(HarnessError::Domain("order list is empty".into()));
    }
    if orders.windows(2).any(|w| w[1] <= w[0]) {
        return Err(HarnessError::Domain(format!("orders must increase strictly, got {orders:?}")));
    }
    if tf.domain.0 > interval.0 || tf.domain.1 < interval.1 {
        return Err(HarnessError::Domain(format!(
            "{} is not defined on the whole {} interval",
            tf.id,
            family.name()
        )));
    }
    weighted_norm(&family, tf)?;
    let target = tf.half_sum(x);

    let mut out = Vec::with_capacity(orders.len());
    for &n in orders {
        let started = Instant::now();
        let spec = KernelSpec::new(family, Cutoff::N(n), Anchor::Point(x));
        let outcome = (|| {
            let kernel = Kernel::new(spec)?;
            let nf = n as f64;
            let (lo, hi) = match family {
                Family::LegendreSeries => (-1.0, 1.0),
                Family::HermiteSeries => {
                    let l = (2.0 * nf + 1.0).sqrt() + 9.0;
                    (tf.effective.0.max(-l), tf.effective.1.min(l))
                }
                Family::LaguerreSeries { alpha } => {
                    (0.0, tf.effective.1.min(4.0 * nf + 2.0 * alpha.max(0.0) + 60.0 + 10.0 * nf.sqrt()))
                }
                _ => unreachable!("checked above"),
            };
            let panels = 2 * n + 4;
            let mut pts: Vec<f64> = (1..panels).map(|i| lo + (hi - lo) * i as f64 / panels as f64).collect();
            pts.extend(tf.breakpoints.iter().copied());
            pts.push(x);
            if matches!(family, Family::LaguerreSeries { .. }) {
                pts.extend([1e-6, 1e-3].map(|s| s * hi));
            }
            let pts = tidy(pts, lo, hi);
            let f = |t: f64| Ok(kernel.eval(t)?.value * tf.eval(t));
            Ok(integrate_guarded(f, lo, hi, &pts, cfg)?)
        })();
        out.push(ConvergenceRecord::new(spec, tf.id, target, started).settle(outcome, 1.0, started));
    }
    Ok(out)
}

/// Iterated integral of the spherical kernel against f for each order.
pub fn run_spherical_convergence(
    sf: &SphericalFunction,
    theta1: f64,
    phi1: f64,
    orders: &[usize],
    cfg: &QuadratureConfig,
) -> Result<Vec<ConvergenceRecord>, HarnessError> {
    if orders.is_empty() {
        return Err(HarnessError::Domain("order list is empty".into()));
    }
    if !(0.0..=PI).contains(&theta1) || !phi1.is_finite() {
        return Err(HarnessError::Domain(format!("anchor ({theta1}, {phi1}) is off the sphere")));
    }
    let target = (sf.f)(theta1, phi1);
    let mut out = Vec::with_capacity(orders.len());
    for &n in orders {
        let started = Instant::now();
        let spec = KernelSpec::new(
            Family::SphericalSeries,
            Cutoff::N(n),
            Anchor::Angles { theta: theta1, phi: phi1 },
        );
        let outcome = (|| {
            let kernel = Kernel::new(spec)?;
            let panels = n + 2;
            let grid = |lo: f64, hi: f64| -> Vec<f64> {
                (1..panels).map(|i| lo + (hi - lo) * i as f64 / panels as f64).collect()
            };
            let (tp, pp) = (grid(0.0, PI), grid(-PI, PI));
            let mut inner_cfg = cfg.clone();
            inner_cfg.abs_tol = 0.1 * cfg.abs_tol;
            inner_cfg.rel_tol = 0.1 * cfg.rel_tol;
            let row = |theta: f64| {
                let g = |phi: f64| Ok(kernel.eval_angles(theta, phi)?.value * (sf.f)(theta, phi));
                Ok(integrate_fallible(g, -PI, PI, &pp, &inner_cfg)?.value)
            };
            Ok(integrate_guarded(row, 0.0, PI, &tp, cfg)?)
        })();
        out.push(ConvergenceRecord::new(spec, sf.id, target, started).settle(outcome, 1.0, started));
    }
    Ok(out)
}

/// Total mass of a classical sequence over the real line. The sinc sequence
/// is only conditionally integrable and is rejected.
pub fn classical_mass(family: Family, n: f64, a: f64) -> Result<IntegralResult, HarnessError> {
    let tail = match family {
        Family::ClassicalCauchy => TailPolicy::AlgebraicExtrapolate { exponent: 2.0 },
        Family::ClassicalGaussian => TailPolicy::ExponentialCut { threshold: 1e-18 },
        _ => {
            return Err(HarnessError::Domain(format!("mass is not defined for {family}")));
        }
    };
    let kernel = Kernel::new(KernelSpec::new(family, Cutoff::R(n), Anchor::Point(a)))?;
    let cfg = QuadratureConfig::with_tolerances(1e-12, 1e-13).subdivisions(100_000).tail(tail);
    let scale = match family {
        Family::ClassicalCauchy => 1.0 / n,
        _ => 1.0 / n.sqrt(),
    };
    let pts: Vec<f64> = [0.25, 1.0, 4.0, 16.0, 64.0].iter().map(|k| k * scale).collect();
    let side = |sign: f64| -> Result<IntegralResult, HarnessError> {
        let failure = std::cell::Cell::new(false);
        let g = |u: f64| match kernel.eval(a + sign * u) {
            Ok(v) => v.value,
            Err(_) => {
                failure.set(true);
                0.0
            }
        };
        let r = integrate_semi_infinite_with_breakpoints(g, 0.0, &pts, &cfg)
            .map_err(crate::kernels::KernelError::from)?;
        if failure.get() {
            return Err(HarnessError::Domain(format!("{family} could not be evaluated")));
        }
        Ok(r)
    };
    Ok(side(1.0)?.combine(side(-1.0)?))
}

#[cfg(test)]
mod tests {
    use super::super::catalog::{lookup, lookup_spherical};
    use super::*;

    #[test]
    fn hypothesis_enforced() {
        let sq = lookup("square").unwrap();
        let err = run_convergence(Family::BesselHankel { nu: 0.0 }, sq, 1.0, &[10.0], &default_config());
        assert!(matches!(err, Err(HarnessError::Hypothesis(_))), "{err:?}");
        let exp = lookup("exp_decay").unwrap();
        let err = run_convergence(Family::Airy, exp, 0.5, &[10.0], &default_config());
        assert!(matches!(err, Err(HarnessError::Hypothesis(_))));
        let gauss = lookup("gauss").unwrap();
        let err = run_convergence(Family::Weber, gauss, 0.0, &[10.0], &default_config());
        assert!(matches!(err, Err(HarnessError::Hypothesis(_))), "mass beyond |b| = 5 must be refused");
    }

    #[test]
    fn ladder_validation() {
        let exp = lookup("exp_decay").unwrap();
        let fam = Family::BesselHankel { nu: 0.0 };
        for bad in [&[][..], &[10.0, 5.0], &[-1.0]] {
            let r = run_convergence(fam, exp, 1.0, bad, &default_config());
            assert!(matches!(r, Err(HarnessError::Domain(_))), "{bad:?}");
        }
    }

    #[test]
    fn bessel_step_target_is_half_sum() {
        let tf = lookup("step_decay").unwrap();
        let rec = run_convergence(Family::BesselHankel { nu: 0.0 }, tf, 1.0, &[25.0], &default_config()).unwrap();
        assert_eq!(rec[0].target, 0.5 * (-1.0f64).exp());
        assert!(rec[0].converged && rec[0].abs_error < 0.05, "{rec:?}");
    }

    #[test]
    fn legendre_examples() {
        let cfg = default_config();
        let sign = lookup("sign").unwrap();
        let rec = run_series_convergence(Family::LegendreSeries, sign, 0.0, &[10, 20, 40], &cfg).unwrap();
        assert_eq!(rec[0].target, 0.0);
        assert!(rec[2].computed.abs() <= 0.05, "{rec:?}");
        let sq = lookup("square").unwrap();
        let rec = run_series_convergence(Family::LegendreSeries, sq, 0.5, &[2, 3, 10], &cfg).unwrap();
        for r in rec {
            assert!(r.abs_error < 1e-9, "{r:?}");
        }
    }

    #[test]
    fn hermite_constant_is_exact() {
        let one = lookup("constant").unwrap();
        let rec = run_series_convergence(Family::HermiteSeries, one, 0.0, &[5, 10, 20], &default_config()).unwrap();
        for r in rec {
            assert!(r.abs_error < 1e-9, "{r:?}");
        }
    }

    #[test]
    fn spherical_examples() {
        let cfg = QuadratureConfig::with_tolerances(1e-11, 1e-11).subdivisions(10_000);
        let one = lookup_spherical("sph_constant").unwrap();
        for r in run_spherical_convergence(one, 1.1, -0.4, &[0, 3, 6], &cfg).unwrap() {
            assert!(r.abs_error < 1e-8, "{r:?}");
        }
        let c = lookup_spherical("sph_cos_theta").unwrap();
        for r in run_spherical_convergence(c, PI / 3.0, 0.0, &[1, 2, 5], &cfg).unwrap() {
            assert!((r.computed - 0.5).abs() < 1e-8, "{r:?}");
        }
    }

    #[test]
    fn cauchy_mass_is_one() {
        for n in [10.0, 1e3] {
            let m = classical_mass(Family::ClassicalCauchy, n, 0.5).unwrap();
            assert!((m.value - 1.0).abs() < 1e-10, "n = {n}: {m:?}");
        }
        assert!(classical_mass(Family::ClassicalSinc, 10.0, 0.0).is_err());
    }
}
