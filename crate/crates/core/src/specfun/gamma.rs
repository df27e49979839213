use std::f64::consts::PI;

use num_complex::Complex64;

use super::SpecfunError;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_406;
const SHIFT_TO: f64 = 15.0;

// B_{2j} / (2j (2j-1)) for j = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

fn stirling_tail(z: Complex64) -> Complex64 {
    let w = z.inv();
    let w2 = w * w;
    let mut acc = Complex64::new(0.0, 0.0);
    for c in STIRLING.iter().rev() {
        acc = acc * w2 + c;
    }
    acc * w
}

/// Log-gamma on the branch continuous off the negative real axis that agrees
/// with the real logarithm on the positive axis (the usual `loggamma`).
/// Arguments are shifted up with principal logarithms, which keeps the branch.
pub fn ln_gamma_complex(z: Complex64) -> Result<Complex64, SpecfunError> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(SpecfunError::Domain(format!("ln_gamma of non-finite {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(SpecfunError::Domain(format!("gamma pole at {}", z.re)));
    }
    let mut shifted = z;
    let mut log_shift = Complex64::new(0.0, 0.0);
    while shifted.re < SHIFT_TO {
        log_shift += shifted.ln();
        shifted += 1.0;
    }
    let main = (shifted - 0.5) * shifted.ln() - shifted + HALF_LN_2PI + stirling_tail(shifted);
    Ok(main - log_shift)
}

/// arg Gamma(z) on the continuous branch of [`ln_gamma_complex`].
pub fn arg_gamma(z: Complex64) -> Result<f64, SpecfunError> {
    Ok(ln_gamma_complex(z)?.im)
}

/// ln |Gamma(x)| for real x, not a non-positive integer.
pub fn ln_gamma(x: f64) -> Result<f64, SpecfunError> {
    if x > 0.0 {
        let mut shifted = x;
        let mut prod = 1.0;
        while shifted < SHIFT_TO {
            prod *= shifted;
            shifted += 1.0;
        }
        let z = Complex64::new(shifted, 0.0);
        let main = (shifted - 0.5) * shifted.ln() - shifted + HALF_LN_2PI + stirling_tail(z).re;
        return Ok(main - prod.ln());
    }
    if x == x.round() || !x.is_finite() {
        return Err(SpecfunError::Domain(format!("gamma pole at {x}")));
    }
    Ok(PI.ln() - (PI * x).sin().abs().ln() - ln_gamma(1.0 - x)?)
}

/// Gamma(x) for real x.
pub fn gamma(x: f64) -> Result<f64, SpecfunError> {
    if x > 0.0 {
        if x > 171.6 {
            return Err(SpecfunError::Overflow(format!("gamma({x})")));
        }
        let mut shifted = x;
        let mut prod = 1.0;
        while shifted < SHIFT_TO {
            prod *= shifted;
            shifted += 1.0;
        }
        // Stirling in product form; the power is split to avoid overflow.
        let half_pow = shifted.powf(0.5 * (shifted - 0.5));
        let tail = stirling_tail(Complex64::new(shifted, 0.0)).re.exp();
        let g = (2.0 * PI).sqrt() * half_pow * (half_pow * (-shifted).exp()) * tail;
        return Ok(g / prod);
    }
    if x == x.round() || !x.is_finite() {
        return Err(SpecfunError::Domain(format!("gamma pole at {x}")));
    }
    Ok(PI / ((PI * x).sin() * gamma(1.0 - x)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn real_gamma_values() {
        assert!(close(gamma(1.0).unwrap(), 1.0, 4e-15));
        assert!(close(gamma(5.0).unwrap(), 24.0, 1e-14));
        assert!(close(gamma(0.5).unwrap(), PI.sqrt(), 1e-14));
        assert!(close(gamma(0.25).unwrap(), 3.625_609_908_221_908_3, 1e-14));
        assert!(close(gamma(-0.5).unwrap(), -2.0 * PI.sqrt(), 1e-14));
        assert!(close(ln_gamma(100.0).unwrap(), 359.134_205_369_575_4, 1e-15));
        assert!(gamma(0.0).is_err());
        assert!(gamma(-3.0).is_err());
    }

    #[test]
    fn complex_log_gamma_matches_reference() {
        // loggamma(0.5 + 2i) and loggamma(1 - 1i)
        let v = ln_gamma_complex(Complex64::new(0.5, 2.0)).unwrap();
        assert!((v.re - (-2.222_655_864_053_258_2)).abs() < 1e-13, "{v}");
        assert!((v.im - (-0.592_536_981_977_034_6)).abs() < 1e-13, "{v}");
        let n = ln_gamma_complex(Complex64::new(-3.7, 0.2)).unwrap();
        assert!((n.re - (-1.636_433_092_562_456_4)).abs() < 1e-12, "{n}");
        assert!((n.im - (-12.663_282_679_635_772)).abs() < 1e-12, "{n}");
        let w = ln_gamma_complex(Complex64::new(1.0, -1.0)).unwrap();
        assert!((w.re - (-0.650_923_199_301_856_8)).abs() < 1e-13, "{w}");
        assert!((w.im - 0.301_640_320_467_533_2).abs() < 1e-13, "{w}");
    }

    #[test]
    fn modulus_of_gamma_on_critical_line() {
        for &a in &[0.0, 0.3, 1.0, 2.5, -4.0] {
            let v = ln_gamma_complex(Complex64::new(0.5, a)).unwrap();
            let expect = 0.5 * (PI / (PI * a).cosh()).ln();
            assert!((v.re - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn branch_is_continuous_across_shifts() {
        let mut prev = arg_gamma(Complex64::new(-3.7, 0.2)).unwrap();
        for i in 1..=400 {
            let x = -3.7 + i as f64 * 0.02;
            let cur = arg_gamma(Complex64::new(x, 0.2)).unwrap();
            assert!((cur - prev).abs() < 0.5, "jump at {x}: {prev} -> {cur}");
            prev = cur;
        }
    }
}
