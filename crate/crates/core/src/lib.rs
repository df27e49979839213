//! Delta-sequence kernels built from special functions.
//!
//! [`specfun`] supplies Bessel, Airy, Coulomb, Weber and orthogonal-polynomial
//! evaluators. [`kernels`] turns them into closed-form kernels with
//! quadrature oracles, [`quadrature`] is the integration engine, and
//! [`asymptotics`] checks the large-argument forms. [`harness`] runs
//! convergence experiments against a catalog of test functions; [`config`]
//! reads the experiment files used by the command-line tool.

pub mod asymptotics;
pub mod config;
pub mod harness;
pub mod kernels;
pub mod quadrature;
pub mod specfun;
