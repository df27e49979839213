//! Adaptive one-dimensional quadrature.
//!
//! The engine is a globally adaptive Gauss-Kronrod (10/21) bisection scheme
//! with user breakpoints, plus two drivers built on top of it: truncation of
//! semi-infinite ranges according to a declared decay class, and arch-wise
//! integration of oscillatory integrands given a monotone phase.
//!
//! All drivers are deterministic: panel contributions are summed with
//! compensated accumulation in order of their lower endpoint, so the same
//! inputs give bit-identical results.

mod adaptive;
mod oscillatory;
mod rule;
mod semi_infinite;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

pub use adaptive::{integrate_adaptive, integrate_with_breakpoints};
pub(crate) use adaptive::integrate_generic;
pub use oscillatory::{integrate_oscillatory, phase_crossings};
pub use semi_infinite::{
    integrate_semi_infinite, integrate_semi_infinite_with_breakpoints, integrate_whole_line,
};

/// Phase function used to split oscillatory integrands into arches.
pub type PhaseFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// How the tail of a semi-infinite integral is handled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailPolicy {
    /// Truncate where the integrand magnitude falls below `threshold` and the
    /// estimated exponential tail is below half the absolute tolerance.
    ExponentialCut { threshold: f64 },
    /// The integrand decays like `x^-exponent` (exponent > 1); the remaining
    /// tail is added analytically from the value at the truncation point.
    AlgebraicExtrapolate { exponent: f64 },
}

impl Default for TailPolicy {
    fn default() -> Self {
        TailPolicy::ExponentialCut { threshold: 1e-18 }
    }
}

#[derive(Clone)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub tail_policy: TailPolicy,
    /// When present, `integrate_adaptive` adds the points where this phase
    /// crosses a multiple of pi to its breakpoint list.
    pub oscillation_hint: Option<PhaseFn>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 10_000,
            tail_policy: TailPolicy::default(),
            oscillation_hint: None,
        }
    }
}

impl fmt::Debug for QuadratureConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuadratureConfig")
            .field("abs_tol", &self.abs_tol)
            .field("rel_tol", &self.rel_tol)
            .field("max_subdivisions", &self.max_subdivisions)
            .field("tail_policy", &self.tail_policy)
            .field("oscillation_hint", &self.oscillation_hint.is_some())
            .finish()
    }
}

impl QuadratureConfig {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        QuadratureConfig {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    pub fn tail(mut self, policy: TailPolicy) -> Self {
        self.tail_policy = policy;
        self
    }

    pub fn subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }

    pub fn validate(&self) -> Result<(), QuadError> {
        let tols_ok = self.abs_tol > 0.0
            && self.rel_tol > 0.0
            && self.abs_tol.is_finite()
            && self.rel_tol.is_finite();
        if !tols_ok {
            return Err(QuadError::InvalidConfig(format!(
                "tolerances must be positive and finite (abs_tol={}, rel_tol={})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_subdivisions < 1 {
            return Err(QuadError::InvalidConfig(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        match self.tail_policy {
            TailPolicy::ExponentialCut { threshold } if !(threshold > 0.0) => Err(
                QuadError::InvalidConfig("exponential cut threshold must be positive".into()),
            ),
            TailPolicy::AlgebraicExtrapolate { exponent } if !(exponent > 1.0) => {
                Err(QuadError::InvalidConfig(
                    "algebraic tail exponent must exceed 1".into(),
                ))
            }
            _ => Ok(()),
        }
    }

    pub(crate) fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub subdivisions_used: usize,
    pub converged: bool,
}

impl IntegralResult {
    /// Sum of two results over adjacent ranges.
    pub fn combine(self, other: IntegralResult) -> IntegralResult {
        IntegralResult {
            value: self.value + other.value,
            abs_error_estimate: self.abs_error_estimate + other.abs_error_estimate,
            subdivisions_used: self.subdivisions_used + other.subdivisions_used,
            converged: self.converged && other.converged,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),
    #[error("integrand is not finite at x = {x}")]
    NonFiniteIntegrand { x: f64 },
    #[error("tail estimate failed: {0}")]
    TailFailure(String),
    #[error("phase partition failed: {0}")]
    PartitionFailure(String),
}

/// Values that can be integrated: reals, complex numbers, and small tuples of
/// either. The error estimate uses `norm`.
pub trait QuadValue:
    Copy
    + Default
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<f64, Output = Self>
{
    fn norm(&self) -> f64;
    fn is_finite_value(&self) -> bool;
}

impl QuadValue for f64 {
    fn norm(&self) -> f64 {
        self.abs()
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn norm(&self) -> f64 {
        self.re.abs().max(self.im.abs())
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Compensated (Kahan) accumulator, component-wise for vector values.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Compensated<T> {
    sum: T,
    carry: T,
}

impl<T: QuadValue> Compensated<T> {
    pub(crate) fn add(&mut self, x: T) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub(crate) fn value(&self) -> T {
        self.sum
    }
}
