use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::ln_gamma;
use super::{EvalResult, Method, SpecfunError};

/// Below this argument the ascending series is used.
pub const BESSEL_T_CROSS: f64 = 12.0;

const EPS: f64 = f64::EPSILON;
const TINY: f64 = 1e-300;
const MAX_TERMS: usize = 500;

pub fn bessel_j(nu: f64, t: f64) -> Result<EvalResult, SpecfunError> {
    Ok(bessel_j_pair(nu, t)?.0)
}

pub fn bessel_j_prime(nu: f64, t: f64) -> Result<EvalResult, SpecfunError> {
    Ok(bessel_j_pair(nu, t)?.1)
}

/// J_nu(t) and its derivative, computed on one branch.
pub fn bessel_j_pair(nu: f64, t: f64) -> Result<(EvalResult, EvalResult), SpecfunError> {
    if !(nu > -1.0) || !nu.is_finite() {
        return Err(SpecfunError::Domain(format!("bessel order {nu} must exceed -1")));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(SpecfunError::Domain(format!("bessel argument {t} must be finite and >= 0")));
    }
    if t == 0.0 {
        return at_origin(nu);
    }
    if t <= BESSEL_T_CROSS {
        let (j, jp, err, errp) = series(nu, t)?;
        return Ok((
            EvalResult::new(j, err, Method::Series),
            EvalResult::new(jp, errp, Method::Series),
        ));
    }
    if let Some((j, jp, err)) = hankel(nu, t) {
        return Ok((
            EvalResult::new(j, err, Method::Asymptotic),
            EvalResult::new(jp, err, Method::Asymptotic),
        ));
    }
    let (j, jp) = steed(nu, t)?;
    let err = 1e-14 * (j.abs() + (2.0 / (PI * t)).sqrt());
    Ok((
        EvalResult::new(j, err, Method::Recurrence),
        EvalResult::new(jp, err, Method::Recurrence),
    ))
}

fn at_origin(nu: f64) -> Result<(EvalResult, EvalResult), SpecfunError> {
    let j = if nu == 0.0 {
        1.0
    } else if nu > 0.0 {
        0.0
    } else {
        return Err(SpecfunError::Overflow(format!("J_{nu}(0) is infinite")));
    };
    let jp = if nu == 1.0 {
        0.5
    } else if nu == 0.0 || nu > 1.0 {
        0.0
    } else {
        return Err(SpecfunError::Overflow(format!("J'_{nu}(0) is infinite")));
    };
    Ok((
        EvalResult::new(j, 0.0, Method::Series),
        EvalResult::new(jp, 0.0, Method::Series),
    ))
}

/// Ascending series sum_k (-1)^k (t/2)^(2k+nu) / (k! Gamma(k+nu+1)) and its
/// term-wise derivative.
fn series(nu: f64, t: f64) -> Result<(f64, f64, f64, f64), SpecfunError> {
    let half = 0.5 * t;
    let log_lead = nu * half.ln() - ln_gamma(nu + 1.0)?;
    if log_lead > 700.0 {
        return Err(SpecfunError::Overflow(format!("J_{nu}({t}) leading term")));
    }
    let q = half * half;
    let mut term = log_lead.exp();
    let mut j = term;
    let mut jp = term * nu / t;
    let mut peak = term.abs();
    let mut peak_p = jp.abs();
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= -q / (kf * (kf + nu));
        let dterm = term * (2.0 * kf + nu) / t;
        j += term;
        jp += dterm;
        peak = peak.max(term.abs());
        peak_p = peak_p.max(dterm.abs());
        if kf > half && term.abs() <= EPS * 0.1 * j.abs() && dterm.abs() <= EPS * 0.1 * jp.abs() {
            break;
        }
        if term == 0.0 {
            break;
        }
    }
    Ok((j, jp, 4.0 * EPS * peak, 4.0 * EPS * peak_p))
}

/// Hankel expansion; `None` when the series cannot reach full precision.
fn hankel(nu: f64, t: f64) -> Option<(f64, f64, f64)> {
    let mu = 4.0 * nu * nu;
    let mut a = 1.0_f64;
    let mut sum_a = Complex64::new(1.0, 0.0);
    let mut sum_b = Complex64::new(1.0, 0.0);
    let mut ik = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let b = a * (mu + 4.0 * kf * kf - 1.0) / (8.0 * kf * t);
        a *= (mu - odd * odd) / (8.0 * kf * t);
        ik *= Complex64::new(0.0, 1.0);
        let size = a.abs().max(b.abs());
        if size > last && k > 2 {
            return None;
        }
        sum_a += ik * a;
        sum_b += ik * b;
        last = size;
        if size < 0.1 * EPS {
            let chi = t - (0.5 * nu + 0.25) * PI;
            let phase = Complex64::new(chi.cos(), chi.sin());
            let pref = (2.0 / (PI * t)).sqrt();
            let j = pref * (phase * sum_a).re;
            let jp = pref * (Complex64::new(0.0, 1.0) * phase * sum_b).re;
            let err = pref * (4.0 * EPS + size + EPS * t);
            return Some((j, jp, err));
        }
    }
    None
}

/// Steed's method: CF1 for J'/J at order nu, downward recurrence to a
/// smaller order if needed, and CF2 for (J'+iY')/(J+iY) fixing normalization.
fn steed(nu: f64, x: f64) -> Result<(f64, f64), SpecfunError> {
    let max_iter = 10_000 + 20 * x as usize;
    let nl = ((nu - x + 1.5).floor()).max(0.0) as usize;
    let xmu = nu - nl as f64;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    let mut isign = 1.0;
    let mut h = nu * xi;
    if h.abs() < TINY {
        h = TINY;
    }
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..max_iter {
        b += xi2;
        d = b - d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b - 1.0 / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SpecfunError::NonConvergence(format!("CF1 for J_{nu}({x})")));
    }

    let seed = 1e-150;
    let mut rjl = isign * seed;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let rjp1 = rjpl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let tmp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * tmp - rjl;
        rjl = tmp;
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let mut a = 0.25 - xmu * xmu;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let mut fct = a * xi / (p * p + q * q);
    let mut cr = br + q * fct;
    let mut ci = bi + p * fct;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let mut tmp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = tmp;
    converged = false;
    for i in 2..max_iter {
        a += 2.0 * (i as f64 - 1.0);
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < TINY {
            dr = TINY;
        }
        fct = a / (cr * cr + ci * ci);
        cr = br + cr * fct;
        ci = bi - ci * fct;
        if cr.abs() + ci.abs() < TINY {
            cr = TINY;
        }
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        tmp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = tmp;
        if (dlr - 1.0).abs() + dli.abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SpecfunError::NonConvergence(format!("CF2 for J_{nu}({x})")));
    }
    let gam = (p - f) / q;
    let rjmu = (w / ((p - f) * gam + q)).sqrt().copysign(rjl);
    let scale = rjmu / rjl;
    Ok((rjl1 * scale, rjp1 * scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    // besselj(nu, t) and besselj(nu, t, 1) from mpmath at 30 digits.
    const REFERENCE: [(f64, f64, f64, f64); 12] = [
        (0.0, 1.0, 0.7651976865579666, -0.4400505857449335),
        (0.0, 10.0, -0.24593576445134835, -0.04347274616886144),
        (0.0, 100.0, 0.019985850304223122, 0.07714535201411216),
        (0.5, 2.0, 0.5130161365618278, -0.3630397445467054),
        (2.0, 7.5, -0.23027341052579026, 0.1966546703865829),
        (-0.9, 0.3, 0.45056962653879995, -2.2035164751923664),
        (-0.9, 15.0, -0.20575685321544201, -0.005678913174646643),
        (20.0, 13.0, 0.0008971406296777854, 0.0010714668934182323),
        (20.0, 25.0, 0.05199404922830323, -0.1230285643023004),
        (20.0, 10000.0, -0.007167699606859771, -0.003504800342276181),
        (7.3, 40.0, -0.1260122407020463, 0.018848864355715284),
        (0.0, 9999.5, -0.004478727403128425, -0.006603272200132839),
    ];

    #[test]
    fn matches_reference_values() {
        for &(nu, t, j, jp) in &REFERENCE {
            let (a, b) = bessel_j_pair(nu, t).unwrap();
            assert!(rel(a.value, j) < 1e-10, "J_{nu}({t}) = {} vs {j}", a.value);
            assert!(rel(b.value, jp) < 1e-10, "J'_{nu}({t}) = {} vs {jp}", b.value);
        }
    }

    #[test]
    fn origin_values() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap().value, 1.0);
        assert_eq!(bessel_j_prime(1.0, 0.0).unwrap().value, 0.5);
        assert!(matches!(bessel_j(-0.5, 0.0), Err(SpecfunError::Overflow(_))));
        assert!(matches!(bessel_j(-1.0, 1.0), Err(SpecfunError::Domain(_))));
    }

    #[test]
    fn half_order_is_elementary() {
        for &t in &[1.0, 5.0, 20.0] {
            let exact = (2.0 / (PI * t)).sqrt() * t.sin();
            assert!((bessel_j(0.5, t).unwrap().value - exact).abs() < 1e-10 * exact.abs().max(1e-3));
        }
    }

    #[test]
    fn derivative_identity_and_finite_difference() {
        for &t in &[1.0, 10.0] {
            let d = bessel_j_prime(0.0, t).unwrap().value;
            let j1 = bessel_j(1.0, t).unwrap().value;
            assert!((d + j1).abs() < 1e-10 * j1.abs().max(1e-3));
        }
        let h = 1e-5;
        let fd = (bessel_j(0.5, 2.0 + h).unwrap().value - bessel_j(0.5, 2.0 - h).unwrap().value)
            / (2.0 * h);
        assert!((bessel_j_prime(0.5, 2.0).unwrap().value - fd).abs() < 1e-6);
    }

    #[test]
    fn branches_agree_at_crossover() {
        for &nu in &[-0.9, -0.5, 0.0, 0.5, 1.0, 2.0, 7.3, 20.0] {
            let t = BESSEL_T_CROSS;
            let (s, sp, _, _) = series(nu, t).unwrap();
            let (r, rp) = steed(nu, t).unwrap();
            assert!((s - r).abs() < 1e-9 * s.abs().max(0.1), "nu={nu}: {s} vs {r}");
            assert!((sp - rp).abs() < 1e-9 * sp.abs().max(0.1), "nu={nu}: {sp} vs {rp}");
            if let Some((h, hp, _)) = hankel(nu, t) {
                assert!((s - h).abs() < 1e-9 * s.abs().max(0.1));
                assert!((sp - hp).abs() < 1e-9 * sp.abs().max(0.1));
            }
        }
    }

    #[test]
    fn large_argument_residual_is_small() {
        let t = 100.0;
        let j = bessel_j(0.0, t).unwrap().value;
        let lead = (2.0 / (PI * t)).sqrt() * (t - PI / 4.0).cos();
        assert!((j - lead).abs() <= 0.02);
    }
}
