use super::gamma::ln_gamma;
use super::SpecfunError;

fn check_finite(name: &str, x: f64) -> Result<(), SpecfunError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(SpecfunError::Domain(format!("{name} argument {x}")))
    }
}

/// P_k(x) on [-1, 1].
pub fn legendre_p(k: usize, x: f64) -> Result<f64, SpecfunError> {
    if k == 0 {
        check_legendre(x)?;
        return Ok(1.0);
    }
    Ok(legendre_pair(k - 1, x)?.1)
}

/// (P_n(x), P_{n+1}(x)).
pub fn legendre_pair(n: usize, x: f64) -> Result<(f64, f64), SpecfunError> {
    check_legendre(x)?;
    let (mut p0, mut p1) = (1.0, x);
    for k in 1..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    Ok((p0, p1))
}

/// P_0(x), ..., P_n(x).
pub fn legendre_upto(n: usize, x: f64) -> Result<Vec<f64>, SpecfunError> {
    check_legendre(x)?;
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(x);
    }
    for k in 1..n {
        let kf = k as f64;
        out.push(((2.0 * kf + 1.0) * x * out[k] - kf * out[k - 1]) / (kf + 1.0));
    }
    Ok(out)
}

fn check_legendre(x: f64) -> Result<(), SpecfunError> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(SpecfunError::Domain(format!("legendre needs |x| <= 1, got {x}")));
    }
    Ok(())
}

/// Physicists' Hermite polynomial H_k(x).
pub fn hermite_h(k: usize, x: f64) -> Result<f64, SpecfunError> {
    check_finite("hermite", x)?;
    let (mut h0, mut h1) = (1.0, 2.0 * x);
    if k == 0 {
        return Ok(h0);
    }
    for j in 1..k {
        let h2 = 2.0 * x * h1 - 2.0 * j as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    if !h1.is_finite() {
        return Err(SpecfunError::Overflow(format!("H_{k}({x})")));
    }
    Ok(h1)
}

/// Hermite function psi_k(x) = H_k(x) e^(-x^2/2) / sqrt(2^k k! sqrt(pi)).
pub fn hermite_function(k: usize, x: f64) -> Result<f64, SpecfunError> {
    Ok(hermite_weighted_upto(k, x, 0.5)?[k])
}

/// H_j(x) e^(-s x^2) / sqrt(2^j j! sqrt(pi)) for j = 0..=n.
///
/// The normalized recurrence never forms 2^j j!, so values stay representable
/// wherever the result is.
pub fn hermite_weighted_upto(n: usize, x: f64, s: f64) -> Result<Vec<f64>, SpecfunError> {
    check_finite("hermite", x)?;
    let start = (-s * x * x - 0.25 * std::f64::consts::PI.ln()).exp();
    let mut out = Vec::with_capacity(n + 1);
    out.push(start);
    if n >= 1 {
        out.push(std::f64::consts::SQRT_2 * x * start);
    }
    for j in 1..n {
        let jf = j as f64;
        let next = (2.0 / (jf + 1.0)).sqrt() * x * out[j] - (jf / (jf + 1.0)).sqrt() * out[j - 1];
        out.push(next);
    }
    if out.iter().any(|v| !v.is_finite()) {
        return Err(SpecfunError::Overflow(format!("hermite terms at x = {x}")));
    }
    Ok(out)
}

fn check_laguerre(alpha: f64, x: f64) -> Result<(), SpecfunError> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(SpecfunError::Domain(format!("laguerre needs alpha > -1, got {alpha}")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(SpecfunError::Domain(format!("laguerre needs x >= 0, got {x}")));
    }
    Ok(())
}

/// Generalized Laguerre polynomial L_k^(alpha)(x).
pub fn laguerre_l(k: usize, alpha: f64, x: f64) -> Result<f64, SpecfunError> {
    check_laguerre(alpha, x)?;
    let (mut l0, mut l1) = (1.0, 1.0 + alpha - x);
    if k == 0 {
        return Ok(l0);
    }
    for j in 1..k {
        let jf = j as f64;
        let l2 = ((2.0 * jf + 1.0 + alpha - x) * l1 - (jf + alpha) * l0) / (jf + 1.0);
        l0 = l1;
        l1 = l2;
    }
    if !l1.is_finite() {
        return Err(SpecfunError::Overflow(format!("L_{k}^({alpha})({x})")));
    }
    Ok(l1)
}

/// sqrt(k! / Gamma(k + alpha + 1)) L_k^(alpha)(x).
pub fn laguerre_normalized(k: usize, alpha: f64, x: f64) -> Result<f64, SpecfunError> {
    Ok(laguerre_normalized_upto(k, alpha, x)?[k])
}

/// Normalized Laguerre values for j = 0..=n.
pub fn laguerre_normalized_upto(n: usize, alpha: f64, x: f64) -> Result<Vec<f64>, SpecfunError> {
    check_laguerre(alpha, x)?;
    let start = (-0.5 * ln_gamma(alpha + 1.0)?).exp();
    let mut out = Vec::with_capacity(n + 1);
    out.push(start);
    if n >= 1 {
        out.push((1.0 + alpha - x) * start / (1.0 + alpha).sqrt());
    }
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - x) * out[j] - (jf * (jf + alpha)).sqrt() * out[j - 1])
            / ((jf + 1.0) * (jf + 1.0 + alpha)).sqrt();
        out.push(next);
    }
    if out.iter().any(|v| !v.is_finite()) {
        return Err(SpecfunError::Overflow(format!("laguerre terms at x = {x}")));
    }
    Ok(out)
}
