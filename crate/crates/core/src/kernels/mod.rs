//! Delta-approximating kernels.
//!
//! Integral families (Bessel-Hankel, Coulomb, Airy, Weber) are evaluated from
//! their Lommel-type closed forms; series families sum the orthonormal
//! expansions directly. Every family has a brute-force oracle in [`oracle`].

mod classical;
mod closed;
pub mod oracle;
mod series;

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::quadrature::QuadError;
use crate::specfun::{self, CoulombWave, SpecfunError};

pub use classical::{classical_sequence, ClassicalKind};
pub use closed::{airy_kernel_closed, bessel_kernel_closed, coulomb_kernel_closed, weber_kernel_closed};
pub use series::{series_kernel, spherical_kernel};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("invalid kernel: {0}")]
    Domain(String),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("quadrature did not converge: {0}")]
    NotConverged(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    BesselHankel { nu: f64 },
    Coulomb { l: u32 },
    Airy,
    Weber,
    LegendreSeries,
    HermiteSeries,
    LaguerreSeries { alpha: f64 },
    SphericalSeries,
    ClassicalGaussian,
    ClassicalCauchy,
    ClassicalSinc,
}

impl Family {
    /// Short name used on the command line and in output records.
    pub fn name(&self) -> &'static str {
        match self {
            Family::BesselHankel { .. } => "bessel",
            Family::Coulomb { .. } => "coulomb",
            Family::Airy => "airy",
            Family::Weber => "weber",
            Family::LegendreSeries => "legendre",
            Family::HermiteSeries => "hermite",
            Family::LaguerreSeries { .. } => "laguerre",
            Family::SphericalSeries => "spherical",
            Family::ClassicalGaussian => "gaussian",
            Family::ClassicalCauchy => "cauchy",
            Family::ClassicalSinc => "sinc",
        }
    }

    /// Resolves a family name. `nu`, `l` and `alpha` must be given exactly
    /// when the family takes them.
    pub fn parse(
        name: &str,
        nu: Option<f64>,
        l: Option<u32>,
        alpha: Option<f64>,
    ) -> Result<Family, KernelError> {
        let missing = |p: &str| KernelError::Domain(format!("{name} needs parameter {p}"));
        let family = match name {
            "bessel" => Family::BesselHankel { nu: nu.ok_or_else(|| missing("nu"))? },
            "coulomb" => Family::Coulomb { l: l.ok_or_else(|| missing("l"))? },
            "airy" => Family::Airy,
            "weber" => Family::Weber,
            "legendre" => Family::LegendreSeries,
            "hermite" => Family::HermiteSeries,
            "laguerre" => Family::LaguerreSeries { alpha: alpha.ok_or_else(|| missing("alpha"))? },
            "spherical" => Family::SphericalSeries,
            "gaussian" => Family::ClassicalGaussian,
            "cauchy" => Family::ClassicalCauchy,
            "sinc" => Family::ClassicalSinc,
            _ => return Err(KernelError::Domain(format!("unknown kernel family '{name}'"))),
        };
        let stray = [
            ("nu", nu.is_some() && !matches!(family, Family::BesselHankel { .. })),
            ("l", l.is_some() && !matches!(family, Family::Coulomb { .. })),
            ("alpha", alpha.is_some() && !matches!(family, Family::LaguerreSeries { .. })),
        ];
        if let Some((p, _)) = stray.iter().find(|(_, bad)| *bad) {
            return Err(KernelError::Domain(format!("parameter {p} does not apply to {name}")));
        }
        Ok(family)
    }

    /// Parameter string such as `nu=0` or `alpha=0.5`; empty when none.
    pub fn params(&self) -> String {
        match self {
            Family::BesselHankel { nu } => format!("nu={nu}"),
            Family::Coulomb { l } => format!("l={l}"),
            Family::LaguerreSeries { alpha } => format!("alpha={alpha}"),
            _ => String::new(),
        }
    }

    /// True for the families indexed by an integer order n.
    pub fn is_series(&self) -> bool {
        matches!(
            self,
            Family::LegendreSeries
                | Family::HermiteSeries
                | Family::LaguerreSeries { .. }
                | Family::SphericalSeries
        )
    }

    /// The four partial-integral families.
    pub fn is_integral(&self) -> bool {
        matches!(
            self,
            Family::BesselHankel { .. } | Family::Coulomb { .. } | Family::Airy | Family::Weber
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.params();
        if p.is_empty() {
            f.write_str(self.name())
        } else {
            write!(f, "{}({p})", self.name())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cutoff {
    /// Integral cutoff R, or the real index of a classical sequence.
    R(f64),
    /// Series order n.
    N(usize),
}

impl Cutoff {
    pub fn as_f64(&self) -> f64 {
        match *self {
            Cutoff::R(r) => r,
            Cutoff::N(n) => n as f64,
        }
    }
}

impl fmt::Display for Cutoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cutoff::R(r) => write!(f, "{r}"),
            Cutoff::N(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Anchor {
    Point(f64),
    Angles { theta: f64, phi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelSpec {
    pub family: Family,
    pub cutoff: Cutoff,
    pub anchor: Anchor,
}

impl KernelSpec {
    pub fn new(family: Family, cutoff: Cutoff, anchor: Anchor) -> Self {
        KernelSpec { family, cutoff, anchor }
    }

    /// Point anchor, or a domain error for the spherical family.
    pub fn point(&self) -> Result<f64, KernelError> {
        match self.anchor {
            Anchor::Point(a) => Ok(a),
            Anchor::Angles { .. } => Err(KernelError::Domain(format!(
                "{} needs a point anchor",
                self.family
            ))),
        }
    }

    pub fn radius(&self) -> Result<f64, KernelError> {
        match self.cutoff {
            Cutoff::R(r) if r > 0.0 && r.is_finite() => Ok(r),
            c => Err(KernelError::Domain(format!(
                "{} needs a positive real cutoff, got {c}",
                self.family
            ))),
        }
    }

    pub fn order(&self) -> Result<usize, KernelError> {
        match self.cutoff {
            Cutoff::N(n) => Ok(n),
            c => Err(KernelError::Domain(format!(
                "{} needs an integer order, got {c}",
                self.family
            ))),
        }
    }

    /// Checks family parameters, cutoff kind, and anchor domain.
    pub fn validate(&self) -> Result<(), KernelError> {
        let bad = |msg: String| Err(KernelError::Domain(msg));
        match self.family {
            Family::SphericalSeries => {
                self.order()?;
                match self.anchor {
                    Anchor::Angles { theta, phi } if theta.is_finite() && phi.is_finite() => Ok(()),
                    _ => bad("spherical kernel needs finite (theta, phi) anchor".into()),
                }
            }
            Family::LegendreSeries | Family::HermiteSeries | Family::LaguerreSeries { .. } => {
                self.order()?;
                let x = self.point()?;
                match self.family {
                    Family::LegendreSeries if !(x > -1.0 && x < 1.0) => {
                        bad(format!("legendre anchor must lie in (-1, 1), got {x}"))
                    }
                    Family::LaguerreSeries { alpha } if !(alpha > -1.0) => {
                        bad(format!("laguerre needs alpha > -1, got {alpha}"))
                    }
                    Family::LaguerreSeries { .. } if !(x > 0.0) => {
                        bad(format!("laguerre anchor must be positive, got {x}"))
                    }
                    _ if !x.is_finite() => bad(format!("anchor {x}")),
                    _ => Ok(()),
                }
            }
            _ => {
                self.radius()?;
                let a = self.point()?;
                match self.family {
                    Family::BesselHankel { nu } if !(nu > -1.0) || !nu.is_finite() => {
                        bad(format!("bessel order must exceed -1, got {nu}"))
                    }
                    Family::BesselHankel { .. } | Family::Coulomb { .. } if !(a > 0.0) => {
                        bad(format!("{} anchor must be positive, got {a}", self.family))
                    }
                    Family::Weber if !(a.abs() <= specfun::WEBER_A_MAX) => bad(format!(
                        "weber anchor must satisfy |a| <= {}, got {a}",
                        specfun::WEBER_A_MAX
                    )),
                    _ if !a.is_finite() => bad(format!("anchor {a}")),
                    _ => Ok(()),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelValue {
    pub value: f64,
    pub near_diagonal: bool,
    pub abs_error_estimate: f64,
}

impl KernelValue {
    fn plain(value: f64, err: f64) -> Self {
        KernelValue {
            value,
            near_diagonal: false,
            abs_error_estimate: err.abs(),
        }
    }
}

/// Half-width of the window around the anchor where the diagonal branch is used.
pub fn diag_switch(a: f64) -> f64 {
    1e-4 * a.abs().max(1.0)
}

/// A kernel with its anchor-side quantities precomputed.
#[derive(Debug, Clone)]
pub struct Kernel {
    spec: KernelSpec,
    data: AnchorData,
}

#[derive(Debug, Clone)]
enum AnchorData {
    Bessel { nu: f64, a: f64, r: f64, ja: f64, jpa: f64, ja_err: f64, diag: f64 },
    Coulomb { l: u32, a: f64, r: f64, sa: f64, spa: f64 },
    Airy { a: f64, r: f64, ai: f64, aip: f64, err: f64 },
    Weber { a: f64, r: f64, right: (f64, f64), left: (f64, f64), err: f64 },
    Legendre { p: Vec<f64> },
    Hermite { p: Vec<f64> },
    Laguerre { alpha: f64, p: Vec<f64> },
    Spherical { n: usize, y: Vec<Complex64> },
    Classical { kind: ClassicalKind, n: f64, a: f64 },
}

impl Kernel {
    pub fn new(spec: KernelSpec) -> Result<Kernel, KernelError> {
        spec.validate()?;
        let data = match spec.family {
            Family::BesselHankel { nu } => {
                let (a, r) = (spec.point()?, spec.radius()?);
                let (j, jp) = specfun::bessel_j_pair(nu, a * r)?;
                let t = a * r;
                let diag = a * r * r / 2.0
                    * (jp.value * jp.value + (1.0 - nu * nu / (t * t)) * j.value * j.value);
                AnchorData::Bessel {
                    nu,
                    a,
                    r,
                    ja: j.value,
                    jpa: jp.value,
                    ja_err: j.abs_error_estimate + jp.abs_error_estimate,
                    diag,
                }
            }
            Family::Coulomb { l } => {
                let (a, r) = (spec.point()?, spec.radius()?);
                let (sa, spa) = CoulombWave::new(a, l, r)?.eval(r)?;
                AnchorData::Coulomb { l, a, r, sa, spa }
            }
            Family::Airy => {
                let (a, r) = (spec.point()?, spec.radius()?);
                let (ai, aip) = specfun::airy_pair(-r - a)?;
                AnchorData::Airy {
                    a,
                    r,
                    ai: ai.value,
                    aip: aip.value,
                    err: ai.abs_error_estimate + aip.abs_error_estimate,
                }
            }
            Family::Weber => {
                let (a, r) = (spec.point()?, spec.radius()?);
                let (w, wp) = specfun::weber_pair(a, r)?;
                let (wl, wpl) = specfun::weber_pair(a, -r)?;
                let err = w.abs_error_estimate
                    + wp.abs_error_estimate
                    + wl.abs_error_estimate
                    + wpl.abs_error_estimate;
                AnchorData::Weber {
                    a,
                    r,
                    right: (w.value, wp.value),
                    left: (wl.value, wpl.value),
                    err,
                }
            }
            Family::LegendreSeries => {
                let x = spec.point()?;
                AnchorData::Legendre { p: specfun::legendre_upto(spec.order()?, x)? }
            }
            Family::HermiteSeries => {
                let x = spec.point()?;
                AnchorData::Hermite { p: specfun::hermite_weighted_upto(spec.order()?, x, 0.0)? }
            }
            Family::LaguerreSeries { alpha } => {
                let x = spec.point()?;
                AnchorData::Laguerre {
                    alpha,
                    p: specfun::laguerre_normalized_upto(spec.order()?, alpha, x)?,
                }
            }
            Family::SphericalSeries => {
                let n = spec.order()?;
                let Anchor::Angles { theta, phi } = spec.anchor else {
                    unreachable!("validated above")
                };
                AnchorData::Spherical { n, y: specfun::spherical_harmonics_upto(n, theta, phi)? }
            }
            Family::ClassicalGaussian | Family::ClassicalCauchy | Family::ClassicalSinc => {
                let kind = match spec.family {
                    Family::ClassicalGaussian => ClassicalKind::Gaussian,
                    Family::ClassicalCauchy => ClassicalKind::Cauchy,
                    _ => ClassicalKind::Sinc,
                };
                AnchorData::Classical { kind, n: spec.radius()?, a: spec.point()? }
            }
        };
        Ok(Kernel { spec, data })
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    /// Kernel value at the integration variable `x` (b for Weber, t for the
    /// series families). The spherical family needs [`Kernel::eval_angles`].
    pub fn eval(&self, x: f64) -> Result<KernelValue, KernelError> {
        match &self.data {
            AnchorData::Bessel { .. } => closed::bessel_eval(&self.data, x),
            AnchorData::Coulomb { .. } => closed::coulomb_eval(&self.data, x),
            AnchorData::Airy { .. } => closed::airy_eval(&self.data, x),
            AnchorData::Weber { .. } => closed::weber_eval(&self.data, x),
            AnchorData::Legendre { .. } | AnchorData::Hermite { .. } | AnchorData::Laguerre { .. } => {
                series::series_eval(&self.data, x)
            }
            AnchorData::Spherical { .. } => Err(KernelError::Domain(
                "spherical kernel takes two angles; use eval_angles".into(),
            )),
            AnchorData::Classical { kind, n, a } => {
                Ok(KernelValue::plain(classical_sequence(*kind, *n, x, *a), 0.0))
            }
        }
    }

    /// Spherical kernel at (theta2, phi2).
    pub fn eval_angles(&self, theta: f64, phi: f64) -> Result<KernelValue, KernelError> {
        match &self.data {
            AnchorData::Spherical { .. } => series::spherical_eval(&self.data, theta, phi),
            _ => Err(KernelError::Domain(format!(
                "{} is not the spherical family",
                self.spec.family
            ))),
        }
    }
}
