//! Printed formulas: parsing, a named catalog, and randomized identity tests.

mod catalog;
mod expr;
mod identity;
mod parse;

use thiserror::Error;

use crate::arith::ArithError;

pub use catalog::{
    catalog_get, eval_formula, eval_named, universal_params_for, CatalogEntry, EntryValue, FormulaCatalog,
};
pub use expr::{BracketExpr, LinearForm, UniversalParams};
pub use identity::{identity_test, identity_test_scaled, IdentityVerdict, Side, Witness};
pub use parse::parse_expr;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("unknown formula {0:?}")]
    UnknownName(String),
    #[error("{0:?} is a matrix, not a scalar")]
    NotScalar(String),
    #[error("{0:?} is a scalar, not a matrix")]
    NotMatrix(String),
    #[error("universal parameters required")]
    MissingParams,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("denominator {0} vanishes")]
    ZeroDenominator(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(transparent)]
    Arith(#[from] ArithError),
}
