//! Brute-force evaluations of the defining integrals, used to check the
//! closed forms.

use std::cell::RefCell;
use std::f64::consts::PI;

use crate::quadrature::{integrate_with_breakpoints, IntegralResult, QuadratureConfig};
use crate::specfun::{self, CoulombWave};

use super::KernelError;

/// Adaptive quadrature of a fallible integrand. The first evaluation error
/// aborts the integral and is returned as is; so is non-convergence.
pub fn integrate_fallible<F>(
    f: F,
    lo: f64,
    hi: f64,
    points: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, KernelError>
where
    F: Fn(f64) -> Result<f64, KernelError>,
{
    let r = integrate_guarded(f, lo, hi, points, cfg)?;
    if !r.converged {
        return Err(KernelError::NotConverged(format!(
            "[{lo}, {hi}]: error estimate {:.2e}",
            r.abs_error_estimate
        )));
    }
    Ok(r)
}

/// Like [`integrate_fallible`], but an unconverged result is returned with
/// `converged == false` instead of as an error.
pub fn integrate_guarded<F>(
    f: F,
    lo: f64,
    hi: f64,
    points: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, KernelError>
where
    F: Fn(f64) -> Result<f64, KernelError>,
{
    let failure: RefCell<Option<KernelError>> = RefCell::new(None);
    let g = |x: f64| {
        if failure.borrow().is_some() {
            return 0.0;
        }
        match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let r = integrate_with_breakpoints(g, lo, hi, points, cfg);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(r?)
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    (1..n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
}

fn tight() -> QuadratureConfig {
    QuadratureConfig::with_tolerances(1e-12, 1e-12).subdivisions(50_000)
}

/// x * int_0^R J_nu(xt) J_nu(at) t dt.
pub fn bessel_oracle(nu: f64, a: f64, r: f64, x: f64) -> Result<f64, KernelError> {
    let f = |t: f64| -> Result<f64, KernelError> {
        Ok(t * specfun::bessel_j(nu, x * t)?.value * specfun::bessel_j(nu, a * t)?.value)
    };
    let pts = grid(0.0, r, 0.5 * PI / x.max(a).max(0.5));
    Ok(x * integrate_fallible(f, 0.0, r, &pts, &tight())?.value)
}

/// int_0^R s(x,l;r) s(a,l;r) dr.
pub fn coulomb_oracle(l: u32, a: f64, r: f64, x: f64) -> Result<f64, KernelError> {
    let wx = CoulombWave::new(x, l, r)?;
    let wa = CoulombWave::new(a, l, r)?;
    let f = |t: f64| -> Result<f64, KernelError> { Ok(wx.eval(t)?.0 * wa.eval(t)?.0) };
    let pts = grid(0.0, r, 0.5 * PI / x.max(a).sqrt().max(0.5));
    let cfg = QuadratureConfig::with_tolerances(1e-11, 1e-11).subdivisions(50_000);
    Ok(integrate_fallible(f, 0.0, r, &pts, &cfg)?.value)
}

/// int_{-R}^T Ai(t-x) Ai(t-a) dt, with T past the point where the product
/// is below 1e-20.
pub fn airy_oracle(a: f64, r: f64, x: f64) -> Result<f64, KernelError> {
    let top = x.max(a) + 10.0;
    let f = |t: f64| -> Result<f64, KernelError> {
        Ok(specfun::airy_ai(t - x)?.value * specfun::airy_ai(t - a)?.value)
    };
    let pts = grid(-r, top, 0.5 * PI / (r + x.abs().max(a.abs())).sqrt().max(1.0));
    Ok(integrate_fallible(f, -r, top, &pts, &tight())?.value)
}

/// int_{-R}^R W(a,x) W(b,x) dx.
pub fn weber_oracle(a: f64, b: f64, r: f64) -> Result<f64, KernelError> {
    let f = |x: f64| -> Result<f64, KernelError> {
        Ok(specfun::weber_w(a, x)?.value * specfun::weber_w(b, x)?.value)
    };
    let pts = grid(-r, r, PI / (0.5 * r + 1.0));
    Ok(integrate_fallible(f, -r, r, &pts, &tight())?.value)
}

/// Christoffel-Darboux form of the Legendre kernel of order n.
pub fn legendre_cd(n: usize, t: f64, x: f64) -> Result<f64, KernelError> {
    let (pt, pt1) = specfun::legendre_pair(n, t)?;
    let c = 0.5 * (n as f64 + 1.0);
    if t != x {
        let (px, px1) = specfun::legendre_pair(n, x)?;
        return Ok(c * (pt1 * px - pt * px1) / (t - x));
    }
    // Diagonal limit: P'_{n+1} P_n - P'_n P_{n+1}.
    let deriv = |k: usize| -> Result<f64, KernelError> {
        if k == 0 {
            return Ok(0.0);
        }
        let (pm, p) = specfun::legendre_pair(k - 1, x)?;
        Ok(k as f64 * (pm - x * p) / (1.0 - x * x))
    };
    Ok(c * (deriv(n + 1)? * pt - deriv(n)? * pt1))
}

/// sin(theta2) * sum_k (2k+1)/(4 pi) P_k(cos gamma).
pub fn spherical_addition(
    n: usize,
    theta1: f64,
    phi1: f64,
    theta2: f64,
    phi2: f64,
) -> Result<f64, KernelError> {
    let cg = theta1.cos() * theta2.cos() + theta1.sin() * theta2.sin() * (phi1 - phi2).cos();
    let p = specfun::legendre_upto(n, cg.clamp(-1.0, 1.0))?;
    let s: f64 = p
        .iter()
        .enumerate()
        .map(|(k, v)| (2 * k + 1) as f64 / (4.0 * PI) * v)
        .sum();
    Ok(theta2.sin() * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{Anchor, Cutoff, Family, Kernel, KernelSpec};

    fn closed(family: Family, a: f64, r: f64, x: f64) -> f64 {
        let spec = KernelSpec::new(family, Cutoff::R(r), Anchor::Point(a));
        Kernel::new(spec).unwrap().eval(x).unwrap().value
    }

    #[test]
    fn bessel_closed_form_matches() {
        let f = Family::BesselHankel { nu: 0.0 };
        for x in [2.0, 1.0] {
            let d = closed(f, 1.0, 10.0, x) - bessel_oracle(0.0, 1.0, 10.0, x).unwrap();
            assert!(d.abs() < 1e-8, "x={x}: {d:e}");
        }
    }

    #[test]
    fn airy_closed_form_matches() {
        for x in [1.0, 0.0] {
            let d = closed(Family::Airy, 0.0, 20.0, x) - airy_oracle(0.0, 20.0, x).unwrap();
            assert!(d.abs() < 1e-8, "x={x}: {d:e}");
        }
    }

    #[test]
    fn coulomb_closed_form_matches() {
        for x in [2.0, 1.0] {
            let d = closed(Family::Coulomb { l: 0 }, 1.0, 30.0, x) - coulomb_oracle(0, 1.0, 30.0, x).unwrap();
            assert!(d.abs() < 1e-5, "x={x}: {d:e}");
        }
    }

    #[test]
    fn weber_closed_form_matches() {
        let d = closed(Family::Weber, 0.0, 15.0, 0.5) - weber_oracle(0.0, 0.5, 15.0).unwrap();
        assert!(d.abs() < 1e-5, "{d:e}");
    }

    #[test]
    fn cd_diagonal_is_continuous() {
        let on = legendre_cd(12, 0.4, 0.4).unwrap();
        let off = legendre_cd(12, 0.4 + 1e-6, 0.4).unwrap();
        assert!((on - off).abs() < 1e-5 * on.abs());
    }
}
