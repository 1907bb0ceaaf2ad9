//! The centralizer algebra on the fused space `W ⊗ W`, its Wedderburn blocks,
//! and the fused operator's spectrum block by block.
//!
//! The analysis runs over a prime field only: splitting the algebra needs the
//! roots of a characteristic polynomial.

mod centralizer;
mod compare;
mod grading;

use thiserror::Error;

use crate::arith::{ArithError, PrimeField};
use crate::formulas::FormulaError;
use crate::fusion::{fused_s, idempotent_e, FusionError, Normalization};
use crate::linalg::LinalgError;
use crate::rep::{RepError, RepFamily};

pub use centralizer::{
    block_charpolys, build_centralizer, wedderburn_split, AlgebraBlock, BlockSpectrum, CentralizerAlgebra,
    FusedSpectrum, MAX_WORD_LENGTH,
};
pub use compare::{compare_to_printed, CompareSet, Comparison, PointSpectra};
pub use grading::{basis_weight, tensor_weight, FusedSpace, LocalOp, WeightBlock};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error("degenerate point: {0}")]
    Degenerate(String),
    #[error("span of braid words did not stabilize within length {0}")]
    NotStabilized(usize),
    #[error("no separating central element after {0} draws")]
    SplitFailed(usize),
    #[error("consistency failure: {0}")]
    Consistency(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// The fused space and its split centralizer at one value of `q`.
#[derive(Debug, Clone)]
pub struct SpectralAnalysis {
    space: FusedSpace,
    algebra: CentralizerAlgebra,
}

impl SpectralAnalysis {
    pub fn new(fam: &RepFamily<PrimeField>, seed: u64) -> Result<Self, SpectralError> {
        let f = fam.field();
        let space = FusedSpace::new(fam, &idempotent_e(fam)?)?;
        let algebra = wedderburn_split(f, &space, build_centralizer(f, &space)?, seed)?;
        Ok(SpectralAnalysis { space, algebra })
    }

    pub fn space(&self) -> &FusedSpace {
        &self.space
    }

    pub fn algebra(&self) -> &CentralizerAlgebra {
        &self.algebra
    }

    /// Block spectra of `S(w)` for `w = uh^2`.
    pub fn spectrum(&self, fam: &RepFamily<PrimeField>, wh: &u64, norm: Normalization) -> Result<FusedSpectrum, SpectralError> {
        let s = fused_s(fam, wh, norm)?;
        block_charpolys(fam.field(), &self.space, &self.algebra, &s)
    }
}
