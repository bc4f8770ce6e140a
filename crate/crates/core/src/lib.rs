//! Numerics for the canonical reciprocal cost `J(x) = (x + 1/x)/2 - 1` and
//! the d'Alembert functional equation `H(t+u) + H(t-u) = 2 H(t) H(u)`.
//!
//! The crate is `no_std` (it needs `alloc`) and uses `libm` for the
//! elementary functions. Everything here is a pure function of immutable
//! inputs; [`FunctionHandle`] values are cheap to clone and `Send + Sync`.
//!
//! Module map:
//!
//! * [`cost`]: exact evaluation of `J`, log coordinates, AM-GM and Bregman
//!   forms, the golden-ratio fixed point.
//! * [`handle`]: evaluable functions (analytic families, sample tables,
//!   lifts and perturbations).
//! * [`fixtures`]: the built-in families and counterexamples.
//! * [`dalembert`]: defects of both forms of the equation and identity checks.
//! * [`calibration`]: log-curvature estimation and branch classification.
//! * [`stability`]: quantitative stability certificates.
//! * [`geometry`]: the Hessian metric of `cosh`, its distance, and the
//!   Chebyshev structure of `J`.
#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod calibration;
pub mod cost;
pub mod dalembert;
pub mod fixtures;
pub mod geometry;
pub mod grid;
pub mod handle;
pub mod stability;

mod error;
mod spline;

pub use error::{Error, Result};
pub use handle::{Domain, FunctionHandle, HandleKind};
