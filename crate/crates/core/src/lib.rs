//! Numerical toolkit for Hilfer fractional differential equations with
//! nonlocal boundary conditions.
//!
//! The crate solves
//!
//! ```text
//! D^{mu,nu} z(t) = f(t, z(t)),   t in (a, b]
//! I^{1-gamma} [c z(a+) + d z(b-)] = sum_k lambda_k z(tau_k)
//! ```
//!
//! by Picard iteration on its equivalent integral equation, and evaluates the
//! constants of the accompanying existence certificate.

// NaN-rejecting guards are written as `!(x > y)` on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cli;
pub mod error;
pub mod existence;
pub mod expr;
pub mod fraccalc;
pub mod par;
pub mod solver;
pub mod specfun;

pub use error::{Error, Result};
pub use par::Execution;
