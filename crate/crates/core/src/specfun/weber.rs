use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::gamma::ln_gamma_complex;
use super::{EvalResult, Method, SpecfunError};
use crate::quadrature::{integrate_generic, QuadValue, QuadratureConfig};

/// Largest |a| accepted. The connection formulas carry factors up to
/// e^(5 pi |a| / 4) and the U-integral loses about pi |a| / (2 ln 10) digits
/// to cancellation, so larger parameters are not evaluated.
pub const WEBER_A_MAX: f64 = 5.0;

/// Integrand magnitude, relative to its peak, at which the U-integral is cut.
const CUT: f64 = 1e-18;

/// k_a = sqrt(1 + e^(2 pi a)) - e^(pi a), in a cancellation-free form.
pub fn weber_k(a: f64) -> f64 {
    let e = (PI * a).exp();
    1.0 / ((1.0 + e * e).sqrt() + e)
}

pub fn weber_w(a: f64, x: f64) -> Result<EvalResult, SpecfunError> {
    Ok(weber_pair(a, x)?.0)
}

pub fn weber_w_prime(a: f64, x: f64) -> Result<EvalResult, SpecfunError> {
    Ok(weber_pair(a, x)?.1)
}

/// W(a, x) and dW/dx, via the connection formulas with U(ia, |x| e^(-i pi/4)).
pub fn weber_pair(a: f64, x: f64) -> Result<(EvalResult, EvalResult), SpecfunError> {
    check_a(a)?;
    if !x.is_finite() {
        return Err(SpecfunError::Domain(format!("weber argument {x}")));
    }
    connect(a, x.abs(), x < 0.0)
}

/// Connection formulas: W(a, y) from Re, W(a, -y) from Im of e^(i theta) U.
fn connect(a: f64, y: f64, negative: bool) -> Result<(EvalResult, EvalResult), SpecfunError> {
    let (u, up, err_u) = u_with_error(a, y)?;
    let phi2 = ln_gamma_complex(Complex64::new(0.5, a))?.im;
    let rot = Complex64::from_polar(1.0, 0.5 * phi2 + PI / 8.0);
    let omega = Complex64::from_polar(1.0, -PI / 4.0);
    let v = rot * u;
    let vp = rot * omega * up;
    let k = weber_k(a);
    let growth = (0.25 * PI * a).exp();
    let m = Method::IntegralRepresentation;
    if negative {
        let c = (2.0 / k).sqrt() * growth;
        Ok((
            EvalResult::new(c * v.im, c * err_u, m),
            EvalResult::new(-c * vp.im, c * err_u * (1.0 + y), m),
        ))
    } else {
        let c = (2.0 * k).sqrt() * growth;
        Ok((
            EvalResult::new(c * v.re, c * err_u, m),
            EvalResult::new(c * vp.re, c * err_u * (1.0 + y), m),
        ))
    }
}

/// U(ia, x e^(-i pi/4)) and its derivative with respect to the complex
/// argument, for x >= 0.
pub fn weber_u(a: f64, x: f64) -> Result<(Complex64, Complex64), SpecfunError> {
    check_a(a)?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(SpecfunError::Domain(format!("weber_u needs x >= 0, got {x}")));
    }
    let (u, up, _) = u_with_error(a, x)?;
    Ok((u, up))
}

fn check_a(a: f64) -> Result<(), SpecfunError> {
    if !a.is_finite() || a.abs() > WEBER_A_MAX {
        return Err(SpecfunError::ParameterRange(format!(
            "|a| = {} exceeds {WEBER_A_MAX}",
            a.abs()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, Default)]
struct Pair(Complex64, Complex64);

impl Add for Pair {
    type Output = Pair;
    fn add(self, o: Pair) -> Pair {
        Pair(self.0 + o.0, self.1 + o.1)
    }
}

impl Sub for Pair {
    type Output = Pair;
    fn sub(self, o: Pair) -> Pair {
        Pair(self.0 - o.0, self.1 - o.1)
    }
}

impl Mul<f64> for Pair {
    type Output = Pair;
    fn mul(self, s: f64) -> Pair {
        Pair(self.0 * s, self.1 * s)
    }
}

impl QuadValue for Pair {
    fn norm(&self) -> f64 {
        self.0.norm().max(self.1.norm())
    }
    fn is_finite_value(&self) -> bool {
        self.0.is_finite_value() && self.1.is_finite_value()
    }
}

/// Integral representation with s = e^v:
/// U(b, z) = e^(-z^2/4)/Gamma(1/2+b) * int exp((b+1/2) v - z e^v - e^(2v)/2) dv,
/// and U' = -z/2 U - e^(-z^2/4)/Gamma(1/2+b) * int (same) e^v dv.
fn u_with_error(a: f64, x: f64) -> Result<(Complex64, Complex64, f64), SpecfunError> {
    let z = Complex64::new(x * FRAC_1_SQRT_2, -x * FRAC_1_SQRT_2);
    let c = z.re;
    let log_mag = |v: f64| 0.5 * v - c * v.exp() - 0.5 * (2.0 * v).exp();

    // Peak of the integrand modulus, then the cut points on either side.
    let mut v_peak = -40.0;
    let mut g_peak = log_mag(v_peak);
    let mut v = -40.0;
    while v <= 3.0 {
        let g = log_mag(v);
        if g > g_peak {
            g_peak = g;
            v_peak = v;
        }
        v += 0.05;
    }
    let floor = g_peak + CUT.ln();
    let v_lo = 2.0 * floor;
    let (mut lo, mut hi) = (v_peak, v_peak + 1.0);
    while log_mag(hi) > floor {
        lo = hi;
        hi += 1.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if log_mag(mid) > floor {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let v_hi = hi;

    let expo = Complex64::new(0.5, a);
    let mut f = |v: f64| {
        let ev = v.exp();
        let w = (expo * v - z * ev - 0.5 * ev * ev).exp();
        Pair(w, w * ev)
    };
    let peak = g_peak.exp();
    let cfg = QuadratureConfig::with_tolerances(1e-13 * peak, 1e-12).subdivisions(20_000);
    let mut breaks: Vec<f64> = Vec::new();
    // Breakpoints every 4 units along the slowly decaying left tail.
    let mut b = v_peak.floor();
    while b > v_lo {
        breaks.push(b);
        b -= 4.0;
    }
    let (integral, err, _, converged) = integrate_generic(&mut f, v_lo, v_hi, &breaks, &cfg)
        .map_err(|e| SpecfunError::Quadrature(e.to_string()))?;
    // The estimate can stall slightly above 1e-13 * peak where the integrand
    // cancels strongly; such results are kept, with the estimate propagated.
    if !converged && !(err <= 1e-11 * peak) {
        return Err(SpecfunError::Quadrature(format!(
            "U-integral error estimate {err:.2e} above tolerance (a = {a}, x = {x})"
        )));
    }
    let ln_g = ln_gamma_complex(Complex64::new(0.5, a))?;
    let pref = (-z * z * 0.25 - ln_g).exp();
    let u = pref * integral.0;
    let up = -z * 0.5 * u - pref * integral.1;
    let err_u = pref.norm() * (err + CUT * peak * (v_hi - v_lo));
    Ok((u, up, err_u))
}

#[cfg(test)]
mod tests {
    use super::*;

    // pcfw(a, x) and its x-derivative from mpmath at 25 digits.
    const REFERENCE: [(f64, f64, f64, f64); 13] = [
        (0.0, 0.0, 1.0227656721131686, -0.4888705337234619),
        (0.0, 1.5, 0.22960009916312815, -0.6138624292597322),
        (0.0, -1.5, 1.6050209192353961, -0.06418969137726781),
        (0.5, 3.0, -0.13202344199703597, -0.30300864830028024),
        (0.5, -3.0, 2.341867320365181, 2.199563534815784),
        (-2.0, 4.2, -0.35365470509289165, -1.2850121149514209),
        (-2.0, -4.2, 0.5193666217247601, 0.9404868483085165),
        (3.0, 1.0, 0.10168222648566741, -0.16142474738761178),
        (3.0, -1.0, 3.001251077334582, -5.069949988429225),
        (-5.0, 10.0, -0.10212233339682725, 2.2768561614834724),
        (5.0, -2.0, 37.061938177853726, -76.05104151349344),
        (1.0, 40.0, 0.02341248983482942, -0.4614740813777758),
        (0.0, -25.0, -0.019696944369691122, -5.488304708925413),
    ];

    #[test]
    fn matches_reference_values() {
        for &(a, x, w, wp) in &REFERENCE {
            let (r, rp) = weber_pair(a, x).unwrap();
            let tol = 1e-12 * (1.0 + w.abs()) * (0.5 * PI * a.abs()).exp();
            assert!((r.value - w).abs() < tol, "W({a},{x}) = {} vs {w}", r.value);
            assert!(
                (rp.value - wp).abs() < tol * (1.0 + x.abs()),
                "W'({a},{x}) = {} vs {wp}",
                rp.value
            );
        }
    }

    #[test]
    fn k_at_zero() {
        assert!((weber_k(0.0) - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((weber_k(0.0) - 0.414_213_6).abs() < 1e-7);
    }

    #[test]
    fn both_connection_formulas_agree_at_origin() {
        for &a in &[-3.0, -0.7, 0.0, 1.2, 4.0] {
            let (r, rp) = connect(a, 0.0, false).unwrap();
            let (l, lp) = connect(a, 0.0, true).unwrap();
            assert!((r.value - l.value).abs() < 1e-9 * r.value.abs(), "a={a}");
            assert!((rp.value - lp.value).abs() < 1e-9 * rp.value.abs(), "a={a}");
        }
    }

    #[test]
    fn wronskian_is_constant() {
        let wr = |x: f64| {
            let (wp, wpp) = weber_pair(0.0, x).unwrap();
            let (wm, wmp) = weber_pair(0.0, -x).unwrap();
            wp.value * wmp.value + wm.value * wpp.value
        };
        let mid = wr(2.0);
        for &x in &[1.0, 3.0] {
            assert!((wr(x) - mid).abs() < 1e-8);
        }
        assert!((mid + 1.0).abs() < 1e-9);
    }

    #[test]
    fn derivative_at_origin() {
        for &a in &[-2.0, 0.0, 1.5] {
            let g = |b: Complex64| ln_gamma_complex(b).unwrap();
            let ratio = (g(Complex64::new(0.75, 0.5 * a)) - g(Complex64::new(0.25, 0.5 * a))).re;
            let expect = -(2f64).powf(-0.25) * (0.5 * ratio).exp();
            let got = weber_w_prime(a, 0.0).unwrap().value;
            assert!((got - expect).abs() < 1e-9 * expect.abs(), "a={a}: {got} vs {expect}");
        }
    }

    #[test]
    fn envelope_at_large_x() {
        let k0 = weber_k(0.0);
        let bound = (2.0 * k0 / 40.0).sqrt() * 1.05;
        for i in 0..40 {
            let x = 40.0 + 0.025 * i as f64;
            assert!(weber_w(0.0, x).unwrap().value.abs() <= bound);
        }
    }

    #[test]
    fn parameter_range_is_enforced() {
        assert!(matches!(weber_w(5.5, 1.0), Err(SpecfunError::ParameterRange(_))));
    }
}
