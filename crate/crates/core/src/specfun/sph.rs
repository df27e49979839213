use std::f64::consts::PI;

use num_complex::Complex64;

use super::SpecfunError;

/// Orthonormal Y_k^l(theta, phi) with the Condon-Shortley phase.
pub fn spherical_harmonic(k: usize, l: i64, theta: f64, phi: f64) -> Result<Complex64, SpecfunError> {
    let m = l.unsigned_abs() as usize;
    if m > k {
        return Err(SpecfunError::Domain(format!("harmonic index |{l}| > {k}")));
    }
    check_angles(theta, phi)?;
    let p = normalized_column(k, m, theta.cos(), theta.sin())[k - m];
    let y = Complex64::from_polar(p, m as f64 * phi);
    if l < 0 {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        Ok(y.conj() * sign)
    } else {
        Ok(y)
    }
}

/// All Y_k^l for k <= n, stored at index k^2 + k + l.
pub fn spherical_harmonics_upto(n: usize, theta: f64, phi: f64) -> Result<Vec<Complex64>, SpecfunError> {
    check_angles(theta, phi)?;
    let (c, s) = (theta.cos(), theta.sin());
    let mut out = vec![Complex64::new(0.0, 0.0); (n + 1) * (n + 1)];
    for m in 0..=n {
        let col = normalized_column(n, m, c, s);
        let e = Complex64::from_polar(1.0, m as f64 * phi);
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        for (j, p) in col.iter().enumerate() {
            let k = m + j;
            let y = e * *p;
            out[k * k + k + m] = y;
            if m > 0 {
                out[k * k + k - m] = y.conj() * sign;
            }
        }
    }
    Ok(out)
}

fn check_angles(theta: f64, phi: f64) -> Result<(), SpecfunError> {
    if !theta.is_finite() || !phi.is_finite() {
        return Err(SpecfunError::Domain(format!("angles ({theta}, {phi})")));
    }
    Ok(())
}

/// Normalized associated Legendre values for degrees m..=n at order m.
fn normalized_column(n: usize, m: usize, c: f64, s: f64) -> Vec<f64> {
    let mut pmm = 1.0 / (4.0 * PI).sqrt();
    for i in 1..=m {
        let fi = i as f64;
        pmm *= -((2.0 * fi + 1.0) / (2.0 * fi)).sqrt() * s;
    }
    let mut col = Vec::with_capacity(n + 1 - m);
    col.push(pmm);
    if n > m {
        col.push((2.0 * m as f64 + 3.0).sqrt() * c * pmm);
    }
    let mf = m as f64;
    for k in (m + 2)..=n {
        let kf = k as f64;
        let a = ((4.0 * kf * kf - 1.0) / (kf * kf - mf * mf)).sqrt();
        let b = (((kf - 1.0) * (kf - 1.0) - mf * mf) / (4.0 * (kf - 1.0) * (kf - 1.0) - 1.0)).sqrt();
        let j = k - m;
        col.push(a * (c * col[j - 1] - b * col[j - 2]));
    }
    col
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::legendre_p;

    #[test]
    fn constant_harmonic() {
        let y = spherical_harmonic(0, 0, 1.1, -2.0).unwrap();
        assert!((y.re - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-16 && y.im == 0.0);
    }

    #[test]
    fn matches_reference_values() {
        // mpmath spherharm at 40 digits.
        let refs = [
            (3, 2, 0.7, 1.1, -0.19091020291647628871, 0.26227683853906440773),
            (10, -7, 2.2, -0.4, 0.43228900679794119253, -0.1536916378115260567),
            (6, 0, 1.0, 0.0, 0.2895275649597169596, 0.0),
            (8, 5, 0.3, 2.9, 0.0066432096824340426932, -0.017498673565250101641),
        ];
        for (k, l, t, p, re, im) in refs {
            let y = spherical_harmonic(k, l, t, p).unwrap();
            assert!((y.re - re).abs() < 1e-13 && (y.im - im).abs() < 1e-13, "Y_{k}^{l}: {y}");
        }
    }

    #[test]
    fn conjugation_symmetry() {
        let all = spherical_harmonics_upto(12, 0.9, -1.3).unwrap();
        for k in 0..=12usize {
            for m in 0..=k as i64 {
                let y = spherical_harmonic(k, m, 0.9, -1.3).unwrap();
                let ym = spherical_harmonic(k, -m, 0.9, -1.3).unwrap();
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                assert!((ym - y.conj() * sign).norm() <= 1e-14);
                let idx = (k * k + k) as i64;
                assert!((all[(idx + m) as usize] - y).norm() <= 1e-14);
                assert!((all[(idx - m) as usize] - ym).norm() <= 1e-14);
            }
        }
    }

    #[test]
    fn coincident_sum_rule() {
        for k in 0..=10usize {
            let s: f64 = (-(k as i64)..=k as i64)
                .map(|l| spherical_harmonic(k, l, 2.4, 0.6).unwrap().norm_sqr())
                .sum();
            assert!((s - (2 * k + 1) as f64 / (4.0 * PI)).abs() < 1e-13);
        }
    }

    #[test]
    fn addition_formula_spot_check() {
        let (t1, p1, t2, p2): (f64, f64, f64, f64) = (0.4, 2.0, 1.9, -0.7);
        let cg = t1.cos() * t2.cos() + t1.sin() * t2.sin() * (p1 - p2).cos();
        for k in 0..=10usize {
            let mut s = Complex64::new(0.0, 0.0);
            for l in -(k as i64)..=k as i64 {
                s += spherical_harmonic(k, l, t1, p1).unwrap()
                    * spherical_harmonic(k, l, t2, p2).unwrap().conj();
            }
            let expect = (2 * k + 1) as f64 / (4.0 * PI) * legendre_p(k, cg).unwrap();
            assert!((s.re - expect).abs() < 1e-13 && s.im.abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn index_error() {
        assert!(spherical_harmonic(2, 3, 0.1, 0.1).is_err());
    }
}
