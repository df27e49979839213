//! Special functions used by the kernels.
//!
//! Every evaluator returns an [`EvalResult`] carrying a rough absolute error
//! estimate and the branch that produced the value. Branch selection depends
//! only on the arguments, so results are reproducible bit for bit.

mod airy;
mod bessel;
mod coulomb;
mod gamma;
mod orthopoly;
mod sph;
mod weber;

use std::fmt;

use thiserror::Error;

pub use airy::{airy_ai, airy_ai_prime, airy_pair};
pub use bessel::{bessel_j, bessel_j_pair, bessel_j_prime, BESSEL_T_CROSS};
pub use coulomb::{coulomb_gamow, coulomb_s, CoulombState, CoulombWave};
pub use gamma::{arg_gamma, gamma, ln_gamma, ln_gamma_complex};
pub use orthopoly::{
    hermite_function, hermite_h, hermite_weighted_upto, laguerre_l, laguerre_normalized,
    laguerre_normalized_upto, legendre_p, legendre_pair, legendre_upto,
};
pub use sph::{spherical_harmonic, spherical_harmonics_upto};
pub use weber::{weber_k, weber_pair, weber_u, weber_w, weber_w_prime, WEBER_A_MAX};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Series,
    Asymptotic,
    Recurrence,
    Ode,
    IntegralRepresentation,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Series => "series",
            Method::Asymptotic => "asymptotic",
            Method::Recurrence => "recurrence",
            Method::Ode => "ode",
            Method::IntegralRepresentation => "integral-representation",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub method_used: Method,
}

impl EvalResult {
    pub(crate) fn new(value: f64, abs_error_estimate: f64, method_used: Method) -> Self {
        EvalResult {
            value,
            abs_error_estimate: abs_error_estimate.abs(),
            method_used,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecfunError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("parameter out of supported range: {0}")]
    ParameterRange(String),
    #[error("failed to converge: {0}")]
    NonConvergence(String),
    #[error("quadrature failure: {0}")]
    Quadrature(String),
}
