//! The braid generators on the vector representation and their relations.

mod braid;
mod family;
mod relations;
mod tensor;

use thiserror::Error;

use crate::arith::ArithError;
use crate::formulas::FormulaError;

pub use braid::frt_braid;
pub use family::{build_rep, RepFamily};
pub use relations::{pin_symplectic_q, relation_suite, word_residual, Residual, SpecializationCandidate};
pub use tensor::{apply_product, apply_product_sparse, sparse_scale, sparse_sub, LegFactor, SparseVec, TwoLegOp};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("operator is singular")]
    Singular,
    #[error("relation violated at construction: {0}")]
    Relation(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("point is for {found}, expected {expected}")]
    PointMismatch { expected: String, found: String },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}
