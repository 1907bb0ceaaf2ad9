//! Scalar backends and the bracket notation.

mod field;
mod point;

use thiserror::Error;

pub use field::{is_prime_u64, parse_rational, Backend, Field, PrimeField, RationalField, MERSENNE_61};
pub use point::{
    admissibility_bound, brace_eval, bracket_eval, k_norm, resample_spectral, sample_admissible_point,
    BracketTriple, EvalPoint, Series, MAX_SAMPLE_ATTEMPTS,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("degenerate point: {0}")]
    Degenerate(String),
    #[error("invalid modulus {0}: expected an odd prime below 2^63")]
    InvalidModulus(u64),
    #[error("field too small: p = {p} must exceed {bound}")]
    FieldTooSmall { p: u64, bound: u64 },
    #[error("no admissible point after {0} attempts")]
    Exhausted(usize),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}
