use num_complex::Complex64;

use crate::specfun;

use super::{Anchor, AnchorData, Cutoff, Family, Kernel, KernelError, KernelSpec, KernelValue};

const EPS: f64 = f64::EPSILON;

/// Legendre, Hermite or Laguerre kernel delta_n(t, x); `x` takes the place of
/// the anchor stored in `spec`.
pub fn series_kernel(spec: &KernelSpec, t: f64, x: f64) -> Result<f64, KernelError> {
    if !matches!(
        spec.family,
        Family::LegendreSeries | Family::HermiteSeries | Family::LaguerreSeries { .. }
    ) {
        return Err(KernelError::Domain(format!("{} is not a series family", spec.family)));
    }
    let mut s = *spec;
    s.anchor = Anchor::Point(x);
    Ok(Kernel::new(s)?.eval(t)?.value)
}

/// sin(theta2) * sum_{k<=n} sum_l Y_kl(theta1, phi1) conj(Y_kl(theta2, phi2)).
pub fn spherical_kernel(
    n: usize,
    theta1: f64,
    phi1: f64,
    theta2: f64,
    phi2: f64,
) -> Result<f64, KernelError> {
    let spec = KernelSpec::new(
        Family::SphericalSeries,
        Cutoff::N(n),
        Anchor::Angles { theta: theta1, phi: phi1 },
    );
    Ok(Kernel::new(spec)?.eval_angles(theta2, phi2)?.value)
}

fn dot(a: &[f64], b: &[f64], weight: impl Fn(usize) -> f64) -> (f64, f64) {
    let mut sum = 0.0;
    let mut mag = 0.0;
    for (k, (u, v)) in a.iter().zip(b).enumerate() {
        let term = weight(k) * u * v;
        sum += term;
        mag += term.abs();
    }
    (sum, mag)
}

pub(super) fn series_eval(data: &AnchorData, t: f64) -> Result<KernelValue, KernelError> {
    let (value, mag, n) = match data {
        AnchorData::Legendre { p, .. } => {
            let n = p.len() - 1;
            let q = specfun::legendre_upto(n, t)?;
            let (s, m) = dot(&q, p, |k| k as f64 + 0.5);
            (s, m, n)
        }
        AnchorData::Hermite { p, .. } => {
            let n = p.len() - 1;
            let q = specfun::hermite_weighted_upto(n, t, 1.0)?;
            let (s, m) = dot(&q, p, |_| 1.0);
            (s, m, n)
        }
        AnchorData::Laguerre { alpha, p, .. } => {
            let n = p.len() - 1;
            let alpha = *alpha;
            let w = if t > 0.0 {
                (alpha * t.ln() - t).exp()
            } else if t == 0.0 && alpha >= 0.0 {
                if alpha == 0.0 { 1.0 } else { 0.0 }
            } else {
                return Err(KernelError::Domain(format!(
                    "laguerre kernel needs t > 0 (alpha = {alpha}), got {t}"
                )));
            };
            let q = specfun::laguerre_normalized_upto(n, alpha, t)?;
            let (s, m) = dot(&q, p, |_| 1.0);
            (w * s, w * m, n)
        }
        _ => unreachable!("dispatch"),
    };
    Ok(KernelValue::plain(value, 4.0 * (n as f64 + 1.0) * EPS * mag))
}

pub(super) fn spherical_eval(data: &AnchorData, theta: f64, phi: f64) -> Result<KernelValue, KernelError> {
    let AnchorData::Spherical { n, y } = data else {
        unreachable!("dispatch")
    };
    let y2 = specfun::spherical_harmonics_upto(*n, theta, phi)?;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    for (u, v) in y.iter().zip(&y2) {
        let term = u * v.conj();
        sum += term;
        mag += term.norm();
    }
    if sum.im.abs() > 1e-12 * mag.max(1.0) {
        return Err(KernelError::Domain(format!(
            "spherical kernel has imaginary residue {:e}",
            sum.im
        )));
    }
    let s = theta.sin();
    Ok(KernelValue::plain(s * sum.re, s * 4.0 * EPS * mag))
}
