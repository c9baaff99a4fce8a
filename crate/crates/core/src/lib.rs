//! Finite element solver for the nonlocal parabolic problem
//!
//! ```text
//! u_t - (int_Omega u^2 dx)^gamma Lap u = f   in Omega x (0, T]
//! u = 0                                      on the boundary
//! ```
//!
//! on an interval or the unit square, discretized with continuous degree-k
//! Lagrange elements in space and a linearized Crank-Nicolson scheme in time.
//! The crate also ships the separated-variable exact solutions used to verify
//! the scheme and an experiment harness for convergence and energy studies.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod basis;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod manufactured;
pub mod mesh;
pub mod nonlocal;
pub mod quadrature;
pub mod sparse;
pub mod stepper;

pub use error::{Error, Result};
