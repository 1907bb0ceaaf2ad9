//! Reduced-word operators, the fusion idempotent and the fused operator `S`.

mod fused;
mod word;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{ArithError, Field};
use crate::formulas::FormulaError;
use crate::rep::RepError;

pub use fused::{
    annihilates_complement, fused_s, fused_s_shifted, idempotent_e, idempotent_records, preserves_fused_space,
    project_fused, s_unitarity, scalar_at_unit_argument, ybe_residual, FusedOperator, Normalization, UnitarityOutcome,
    FUSION_SHIFT,
};
pub use word::{
    compare_on_probes, matsumoto_check, permutation_of, reduced_words, word_operator, SpectralWord, WordOperator,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FusionError {
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("degenerate point: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// Location of the first coordinate where two probe images differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeWitness {
    pub probe: usize,
    pub index: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeOutcome {
    pub passed: bool,
    pub probes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ProbeWitness>,
}

impl ProbeOutcome {
    pub fn passed(probes: usize) -> Self {
        ProbeOutcome { passed: true, probes, witness: None }
    }

    pub fn first_difference<F: Field>(f: &F, probe: usize, a: &[F::Elem], b: &[F::Elem]) -> Option<Self> {
        let index = a.iter().zip(b).position(|(x, y)| x != y)?;
        Some(ProbeOutcome {
            passed: false,
            probes: probe + 1,
            witness: Some(ProbeWitness { probe, index, lhs: f.render(&a[index]), rhs: f.render(&b[index]) }),
        })
    }
}

pub(crate) fn random_probe<F: Field, R: Rng + ?Sized>(f: &F, len: usize, rng: &mut R) -> Vec<F::Elem> {
    (0..len).map(|_| f.sample_nonzero(rng)).collect()
}
