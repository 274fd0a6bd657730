//! Numerical toolkit for zeros of random and structured entire functions
//! `F(z) = Σ ξ(n) a(n) z^n` with smooth, log-concave coefficients `a(n)`.

// `!(x > 0.0)` is deliberate: it rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod constants;
pub mod correlations;
pub mod equidist;
pub mod error;
pub mod evaluator;
pub mod numeric;
pub mod sequences;
pub mod weights;
pub mod zeros;

pub use error::{Error, Result};
