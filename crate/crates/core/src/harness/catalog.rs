use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::quadrature::{integrate_semi_infinite, integrate_with_breakpoints, QuadratureConfig};

/// Integrability hypotheses of the integral-kernel convergence theorems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    /// int_1^inf x^(-1/2) |phi| < inf
    Thm1I,
    /// int_0^1 x^(1/2) |phi| < inf
    Thm1II,
    /// int_0^1 x^(nu+1) |phi| < inf for every nu in (-1, -1/2)
    Thm1IIPrime,
    /// int_0^1 x^(-1/4) |phi| and int_1^inf x^(-3/4) |phi| finite
    Thm2,
    /// int |x|^(-3/4) |phi| finite over |x| >= 1
    Thm3,
    /// int_{-inf}^{-1} |phi| e^(pi|x|/4) / |x| and int_1^inf |phi| e^(5 pi x/4) / x finite
    Thm4,
}

impl Flag {
    pub const ALL: [Flag; 6] = [
        Flag::Thm1I,
        Flag::Thm1II,
        Flag::Thm1IIPrime,
        Flag::Thm2,
        Flag::Thm3,
        Flag::Thm4,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Flag::Thm1I => "thm1_i",
            Flag::Thm1II => "thm1_ii",
            Flag::Thm1IIPrime => "thm1_ii_prime",
            Flag::Thm2 => "thm2",
            Flag::Thm3 => "thm3",
            Flag::Thm4 => "thm4",
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One smooth piece of a test function, valid on the closed interval.
#[derive(Debug, Clone, Copy)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub f: fn(f64) -> f64,
}

#[derive(Debug, Clone)]
pub struct TestFunction {
    pub id: &'static str,
    pub domain: (f64, f64),
    pub pieces: Vec<Piece>,
    pub breakpoints: Vec<f64>,
    /// Outside this range the function vanishes or is below ~1e-18 of its
    /// peak; infinite ends mean no truncation is possible.
    pub effective: (f64, f64),
    flags: BTreeSet<Flag>,
}

impl TestFunction {
    fn build(id: &'static str, domain: (f64, f64), pieces: Vec<Piece>, effective: (f64, f64)) -> Self {
        let breakpoints = pieces.iter().skip(1).map(|p| p.lo).collect();
        let mut tf = TestFunction {
            id,
            domain,
            pieces,
            breakpoints,
            effective,
            flags: BTreeSet::new(),
        };
        tf.flags = Flag::ALL.into_iter().filter(|f| tf.certify(*f)).collect();
        tf
    }

    /// Value at x (right-continuous at breakpoints, zero outside the domain).
    pub fn eval(&self, x: f64) -> f64 {
        self.pieces
            .iter()
            .find(|p| p.lo <= x && x < p.hi)
            .map_or(0.0, |p| (p.f)(x))
    }

    /// (phi(a-), phi(a+)).
    pub fn one_sided(&self, a: f64) -> (f64, f64) {
        let left = self.pieces.iter().find(|p| p.lo < a && a <= p.hi).map_or(0.0, |p| (p.f)(a));
        let right = self.pieces.iter().find(|p| p.lo <= a && a < p.hi).map_or(0.0, |p| (p.f)(a));
        (left, right)
    }

    /// Half-sum 0.5 (phi(a-) + phi(a+)).
    pub fn half_sum(&self, a: f64) -> f64 {
        let (l, r) = self.one_sided(a);
        0.5 * (l + r)
    }

    pub fn flags(&self) -> &BTreeSet<Flag> {
        &self.flags
    }

    pub fn has(&self, flag: Flag) -> bool {
        self.flags.contains(&flag)
    }

    fn abs_weighted<W: Fn(f64) -> f64>(&self, w: W) -> impl Fn(f64) -> f64 + use<'_, W> {
        move |x| w(x) * self.eval(x).abs()
    }

    fn certify(&self, flag: Flag) -> bool {
        let on_half_line = self.domain.0 <= 0.0 && self.domain.1 == f64::INFINITY;
        let on_line = self.domain.0 == f64::NEG_INFINITY && self.domain.1 == f64::INFINITY;
        match flag {
            Flag::Thm1I => on_half_line && self.tail_finite(self.abs_weighted(|x| x.powf(-0.5)), 1.0),
            Flag::Thm1II => on_half_line && self.origin_finite(self.abs_weighted(f64::sqrt)),
            Flag::Thm1IIPrime => on_half_line && self.origin_finite(self.abs_weighted(|_| 1.0)),
            Flag::Thm2 => {
                on_half_line
                    && self.origin_finite(self.abs_weighted(|x| x.powf(-0.25)))
                    && self.tail_finite(self.abs_weighted(|x| x.powf(-0.75)), 1.0)
            }
            Flag::Thm3 => {
                on_line
                    && self.tail_finite(self.abs_weighted(|x| x.powf(-0.75)), 1.0)
                    && self.tail_finite(self.mirrored(|x| x.powf(-0.75)), 1.0)
            }
            Flag::Thm4 => {
                on_line
                    && self.tail_finite(self.abs_weighted(|x| (1.25 * PI * x).exp() / x), 1.0)
                    && self.tail_finite(self.mirrored(|x| (0.25 * PI * x).exp() / x), 1.0)
            }
        }
    }

    /// |phi(-x)| w(x), so left tails can be certified as right tails.
    fn mirrored<W: Fn(f64) -> f64>(&self, w: W) -> impl Fn(f64) -> f64 + use<'_, W> {
        move |x| w(x) * self.eval(-x).abs()
    }

    /// Whether int_lo^inf g is finite, judged numerically.
    fn tail_finite(&self, g: impl Fn(f64) -> f64, lo: f64) -> bool {
        let cfg = QuadratureConfig::with_tolerances(1e-12, 1e-10).subdivisions(20_000);
        let reach = self.effective.1.max(-self.effective.0);
        if reach.is_finite() {
            if reach <= lo {
                return true;
            }
            let pts: Vec<f64> = self.breakpoints.iter().flat_map(|b| [*b, -*b]).collect();
            return integrate_with_breakpoints(&g, lo, reach, &pts, &cfg)
                .is_ok_and(|r| r.converged && r.value.is_finite());
        }
        integrate_semi_infinite(&g, lo, &cfg).is_ok_and(|r| r.converged && r.value.is_finite())
    }

    /// Whether int_0^1 g is finite: the integrals over [10^-k, 1] must settle
    /// geometrically as k grows.
    fn origin_finite(&self, g: impl Fn(f64) -> f64) -> bool {
        let cfg = QuadratureConfig::with_tolerances(1e-14, 1e-12).subdivisions(20_000);
        let mut prev: Option<f64> = None;
        let mut prev_step: Option<f64> = None;
        for k in [2, 4, 6, 8, 10, 12] {
            let eps = 10f64.powi(-k);
            let Ok(r) = integrate_with_breakpoints(&g, eps, 1.0, &self.breakpoints, &cfg) else {
                return false;
            };
            if !r.value.is_finite() {
                return false;
            }
            if let Some(p) = prev {
                let step = (r.value - p).abs();
                if let Some(ps) = prev_step {
                    if step > 1e-12 && step > 0.5 * ps {
                        return false;
                    }
                }
                prev_step = Some(step);
            }
            prev = Some(r.value);
        }
        true
    }
}

/// A function on [0, pi] x [-pi, pi] for the spherical series.
#[derive(Debug, Clone, Copy)]
pub struct SphericalFunction {
    pub id: &'static str,
    pub f: fn(f64, f64) -> f64,
}

const INF: f64 = f64::INFINITY;

fn bump(x: f64) -> f64 {
    let u = x - 2.0;
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}

fn make_catalog() -> Vec<TestFunction> {
    let whole = |f: fn(f64) -> f64| vec![Piece { lo: -INF, hi: INF, f }];
    let half = |f: fn(f64) -> f64| vec![Piece { lo: 0.0, hi: INF, f }];
    let zero: fn(f64) -> f64 = |_| 0.0;
    vec![
        TestFunction::build("exp_decay", (0.0, INF), half(|x| (-x).exp()), (0.0, 42.0)),
        TestFunction::build("gauss", (-INF, INF), whole(|x| (-x * x).exp()), (-6.5, 6.5)),
        TestFunction::build("narrow_gauss", (-INF, INF), whole(|x| (-2.0 * x * x).exp()), (-4.6, 4.6)),
        TestFunction::build(
            "step_decay",
            (0.0, INF),
            vec![
                Piece { lo: 0.0, hi: 1.0, f: |x| (-x).exp() },
                Piece { lo: 1.0, hi: INF, f: zero },
            ],
            (0.0, 1.0),
        ),
        TestFunction::build("power_edge", (0.0, INF), half(|x| x.powf(-0.25) * (-x).exp()), (0.0, 42.0)),
        TestFunction::build(
            "bounded_compact",
            (-INF, INF),
            vec![
                Piece { lo: -INF, hi: 1.0, f: zero },
                Piece { lo: 1.0, hi: 3.0, f: bump },
                Piece { lo: 3.0, hi: INF, f: zero },
            ],
            (1.0, 3.0),
        ),
        TestFunction::build(
            "step_gauss",
            (-INF, INF),
            vec![
                Piece { lo: -INF, hi: 0.0, f: |x| (-x * x).exp() },
                Piece { lo: 0.0, hi: INF, f: |x| 0.5 * (-x * x).exp() },
            ],
            (-6.5, 6.5),
        ),
        TestFunction::build(
            "unit_box",
            (-INF, INF),
            vec![
                Piece { lo: -INF, hi: 1.0, f: zero },
                Piece { lo: 1.0, hi: 2.0, f: |_| 1.0 },
                Piece { lo: 2.0, hi: INF, f: zero },
            ],
            (1.0, 2.0),
        ),
        TestFunction::build(
            "ramp",
            (-INF, INF),
            vec![
                Piece { lo: -INF, hi: 0.0, f: zero },
                Piece { lo: 0.0, hi: 1.0, f: |x| x },
                Piece { lo: 1.0, hi: INF, f: zero },
            ],
            (0.0, 1.0),
        ),
        TestFunction::build(
            "sign",
            (-1.0, 1.0),
            vec![
                Piece { lo: -1.0, hi: 0.0, f: |_| -1.0 },
                Piece { lo: 0.0, hi: 1.0, f: |_| 1.0 },
            ],
            (-1.0, 1.0),
        ),
        TestFunction::build("constant", (-INF, INF), whole(|_| 1.0), (-INF, INF)),
        TestFunction::build("square", (-INF, INF), whole(|x| x * x), (-INF, INF)),
        TestFunction::build("cubic", (-INF, INF), whole(|x| x * x * x - 2.0 * x + 0.5), (-INF, INF)),
    ]
}

static CATALOG: OnceLock<Vec<TestFunction>> = OnceLock::new();

/// The shipped test functions, with flags certified on first use.
pub fn catalog() -> &'static [TestFunction] {
    CATALOG.get_or_init(make_catalog)
}

pub fn lookup(id: &str) -> Option<&'static TestFunction> {
    catalog().iter().find(|t| t.id == id)
}

pub fn spherical_catalog() -> &'static [SphericalFunction] {
    const FUNCS: [SphericalFunction; 3] = [
        SphericalFunction { id: "sph_constant", f: |_, _| 1.0 },
        SphericalFunction { id: "sph_cos_theta", f: |t, _| t.cos() },
        SphericalFunction { id: "sph_exp_x", f: |t, p| (t.sin() * p.cos()).exp() },
    ];
    &FUNCS
}

pub fn lookup_spherical(id: &str) -> Option<&'static SphericalFunction> {
    spherical_catalog().iter().find(|t| t.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn get(id: &str) -> &'static TestFunction {
        lookup(id).unwrap()
    }

    #[test]
    fn one_sided_values() {
        let e = (-1.0f64).exp();
        assert_eq!(get("exp_decay").one_sided(1.0), (e, e));
        assert_eq!(get("step_decay").one_sided(1.0), (e, 0.0));
        assert_eq!(get("step_decay").half_sum(1.0), 0.5 * e);
        assert_eq!(get("step_gauss").half_sum(0.0), 0.75);
    }

    #[test]
    fn one_sided_matches_piece_limits() {
        for tf in catalog() {
            for &b in &tf.breakpoints {
                let (l, r) = tf.one_sided(b);
                assert!((tf.eval(b - 1e-13) - l).abs() < 1e-10, "{}", tf.id);
                assert!((tf.eval(b + 1e-13) - r).abs() < 1e-10, "{}", tf.id);
            }
        }
    }

    #[test]
    fn certified_flags() {
        use Flag::*;
        let expect: [(&str, &[Flag], &[Flag]); 8] = [
            ("exp_decay", &[Thm1I, Thm1II, Thm1IIPrime, Thm2], &[Thm3, Thm4]),
            ("gauss", &[Thm1I, Thm2, Thm3, Thm4], &[]),
            ("narrow_gauss", &[Thm3, Thm4], &[]),
            ("step_decay", &[Thm1I, Thm1II, Thm2], &[Thm3]),
            ("power_edge", &[Thm1I, Thm1II, Thm1IIPrime, Thm2], &[Thm3]),
            ("bounded_compact", &[Thm1I, Thm2, Thm3, Thm4], &[]),
            ("constant", &[Thm1II], &[Thm1I, Thm2, Thm3, Thm4]),
            ("square", &[], &[Thm1I, Thm3, Thm4]),
        ];
        for (id, yes, no) in expect {
            let tf = get(id);
            for f in yes {
                assert!(tf.has(*f), "{id} should carry {f}");
            }
            for f in no {
                assert!(!tf.has(*f), "{id} should not carry {f}");
            }
        }
    }

    #[test]
    fn origin_check_rejects_non_integrable_edge() {
        let tf = TestFunction::build("inv", (0.0, INF), vec![Piece { lo: 0.0, hi: INF, f: |x| (-x).exp() / x }], (0.0, 42.0));
        assert!(!tf.has(Flag::Thm1IIPrime));
        assert!(!tf.has(Flag::Thm2));
        assert!(tf.has(Flag::Thm1II));
    }
}
