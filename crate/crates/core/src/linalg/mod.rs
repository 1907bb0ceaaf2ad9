//! Exact dense linear algebra and univariate polynomials over a [`Field`](crate::arith::Field).

mod matrix;
mod poly;

use thiserror::Error;

pub use matrix::{Matrix, SpanBuilder};
pub use poly::{roots_with_multiplicity, Poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is singular")]
    Singular,
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("division by the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not divisible as required")]
    NotDivisible,
    #[error("polynomial is not a perfect power")]
    NotPerfectPower,
    #[error("root splitting did not converge")]
    SplittingFailed,
}
