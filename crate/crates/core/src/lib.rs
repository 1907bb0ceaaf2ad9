//! Exact-arithmetic workbench for the fused trigonometric R-matrix on the
//! adjoint-plus-trivial representation of quantum so(n) and sp(n).
//!
//! The crate is layered bottom-up:
//!
//! - [`arith`]: prime-field and rational scalars, evaluation points, bracket notation
//! - [`formulas`]: the catalog of closed-form expressions and randomized identity testing
//! - [`linalg`]: dense exact matrices and univariate polynomials
//! - [`rep`]: the braid generators on the vector representation and their relations
//! - [`fusion`]: reduced-word operators, the idempotent `E`, and the fused operator `S(u)`
//! - [`spectral`]: the centralizer algebra on the fused space and its Wedderburn blocks
//! - [`report`]: structured verification records
//! - [`run`]: the report-producing drivers behind the command-line tool

pub mod arith;
pub mod formulas;
pub mod fusion;
pub mod linalg;
pub mod rep;
pub mod report;
pub mod run;
pub mod spectral;
