use std::f64::consts::PI;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassicalKind {
    Gaussian,
    Cauchy,
    Sinc,
}

/// Classical delta sequences in x - a with real index n > 0.
pub fn classical_sequence(kind: ClassicalKind, n: f64, x: f64, a: f64) -> f64 {
    let d = x - a;
    match kind {
        ClassicalKind::Gaussian => (n / PI).sqrt() * (-n * d * d).exp(),
        ClassicalKind::Cauchy => n / PI / (1.0 + (n * d) * (n * d)),
        ClassicalKind::Sinc => {
            let u = n * d;
            if u.abs() < 1e-4 {
                n / PI * (1.0 - u * u / 6.0)
            } else {
                (u).sin() / (PI * d)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_values() {
        assert!((classical_sequence(ClassicalKind::Gaussian, 50.0, 0.3, 0.3) - (50.0 / PI).sqrt()).abs() < 1e-15);
        assert_eq!(classical_sequence(ClassicalKind::Sinc, 7.0, 1.0, 1.0), 7.0 / PI);
        assert!((classical_sequence(ClassicalKind::Cauchy, 3.0, 2.0, 2.0) - 3.0 / PI).abs() < 1e-16);
    }

    #[test]
    fn sinc_zero() {
        let n = 40.0;
        assert!(classical_sequence(ClassicalKind::Sinc, n, 0.5 + PI / n, 0.5).abs() < 1e-13);
    }

    #[test]
    fn sinc_branches_meet() {
        let n = 10.0;
        let d = 1e-5 * (1.0 + 1e-9);
        let inner = classical_sequence(ClassicalKind::Sinc, n, d * (1.0 - 2e-9), 0.0);
        let outer = classical_sequence(ClassicalKind::Sinc, n, d, 0.0);
        assert!((inner - outer).abs() < 1e-12);
    }
}
