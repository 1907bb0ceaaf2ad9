//! Weight grading of `V^{⊗4}` and the fused space `W ⊗ W` block by block.
//!
//! Basis vector `i` of `V` (0-based, `i' = n - 1 - i` its partner) carries
//! weight `+ε_{i+1}` below the middle, `-ε_{i'+1}` above it and `0` at the middle
//! of an odd dimension. Every operator built from the braid generator preserves
//! the total weight, so it acts block-diagonally.

use std::collections::BTreeMap;

use crate::arith::{Field, PrimeField};
use crate::linalg::Matrix;
use crate::rep::{RepFamily, TwoLegOp};

use super::SpectralError;

const LEGS: usize = 4;

pub fn basis_weight(n: usize, i: usize) -> Vec<i32> {
    let mut w = vec![0; n / 2];
    let partner = n - 1 - i;
    if i < partner {
        w[i] = 1;
    } else if i > partner {
        w[partner] = -1;
    }
    w
}

pub fn tensor_weight(n: usize, k: usize, index: usize) -> Vec<i32> {
    let mut w = vec![0; n / 2];
    let mut rest = index;
    for _ in 0..k {
        for (a, b) in w.iter_mut().zip(basis_weight(n, rest % n)) {
            *a += b;
        }
        rest /= n;
    }
    w
}

/// A two-leg operator restricted to one weight space of `V^{⊗4}`, stored by columns.
#[derive(Debug, Clone)]
pub struct LocalOp {
    cols: Vec<Vec<(usize, u64)>>,
}

impl LocalOp {
    fn restrict(op: &TwoLegOp<u64>, n: usize, leg: usize, indices: &[usize], local: &[usize]) -> Self {
        let stride = n.pow((LEGS - leg - 2) as u32);
        let cols = indices
            .iter()
            .map(|&z| {
                let pair = (z / stride) % (n * n);
                let base = z - pair * stride;
                op.col(pair)
                    .iter()
                    .map(|(r, v)| {
                        let pos = local[base + r * stride];
                        debug_assert!(pos != usize::MAX, "operator leaves the weight space");
                        (pos, *v)
                    })
                    .collect()
            })
            .collect();
        LocalOp { cols }
    }

    pub fn apply(&self, f: &PrimeField, v: &[u64]) -> Vec<u64> {
        let mut out = vec![0; v.len()];
        for (x, col) in v.iter().zip(&self.cols) {
            if *x == 0 {
                continue;
            }
            for (r, c) in col {
                out[*r] = f.mul_add(&out[*r], c, x);
            }
        }
        out
    }
}

/// One weight space of `V^{⊗4}` together with a basis of its part of `W ⊗ W`.
///
/// The basis rows `b_j` are in reduced echelon form, so the coordinates of a
/// vector in the fused space are its entries at the pivot positions.
#[derive(Debug, Clone)]
pub struct WeightBlock {
    pub weight: Vec<i32>,
    indices: Vec<usize>,
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    projectors: [LocalOp; 2],
    sigmas: [LocalOp; 3],
}

impl WeightBlock {
    /// Dimension of the weight space in `V^{⊗4}`.
    pub fn ambient_dim(&self) -> usize {
        self.indices.len()
    }

    /// Dimension of the weight space in `W ⊗ W`.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// `E_1 E_3 v`
    pub fn project(&self, f: &PrimeField, v: &[u64]) -> Vec<u64> {
        self.projectors[0].apply(f, &self.projectors[1].apply(f, v))
    }

    /// `σ_i v` for `i` in `1..=3`.
    pub fn sigma(&self, f: &PrimeField, i: usize, v: &[u64]) -> Vec<u64> {
        self.sigmas[i - 1].apply(f, v)
    }

    /// The braid word `σ_{i_1} ⋯ σ_{i_m}` applied to `v`, rightmost letter first.
    pub fn apply_word(&self, f: &PrimeField, word: &[usize], v: &[u64]) -> Vec<u64> {
        word.iter().rev().fold(v.to_vec(), |acc, &i| self.sigma(f, i, &acc))
    }

    /// Coordinates of a vector already in `W ⊗ W`.
    pub fn coordinates(&self, v: &[u64]) -> Vec<u64> {
        self.pivots.iter().map(|&p| v[p]).collect()
    }

    /// The matrix of `E_1 E_3 X` on the fused part of this block, given `X` column by column.
    pub fn compress(&self, f: &PrimeField, mut op: impl FnMut(&[u64]) -> Vec<u64>) -> Matrix<u64> {
        let cols: Vec<Vec<u64>> = self.basis.iter().map(|b| self.coordinates(&self.project(f, &op(b)))).collect();
        Matrix::from_columns(self.rank(), &cols)
    }

    /// Restricts an arbitrary two-leg operator to this block.
    pub fn local(&self, space: &FusedSpace, op: &TwoLegOp<u64>, leg: usize) -> LocalOp {
        LocalOp::restrict(op, space.n, leg, &self.indices, &space.local)
    }
}

/// `W ⊗ W ⊂ V^{⊗4}` split into weight blocks, with the block of weight zero singled out.
#[derive(Debug, Clone)]
pub struct FusedSpace {
    n: usize,
    local: Vec<usize>,
    blocks: Vec<WeightBlock>,
    zero: usize,
}

impl FusedSpace {
    pub fn new(fam: &RepFamily<PrimeField>, e: &TwoLegOp<u64>) -> Result<Self, SpectralError> {
        let f = fam.field();
        let n = fam.n();
        let total = n.pow(LEGS as u32);
        let mut groups: BTreeMap<Vec<i32>, Vec<usize>> = BTreeMap::new();
        for z in 0..total {
            groups.entry(tensor_weight(n, LEGS, z)).or_default().push(z);
        }
        let mut local = vec![usize::MAX; total];
        for indices in groups.values() {
            for (pos, &z) in indices.iter().enumerate() {
                local[z] = pos;
            }
        }
        let mut blocks = Vec::new();
        for (weight, indices) in groups {
            let projectors = [
                LocalOp::restrict(e, n, 0, &indices, &local),
                LocalOp::restrict(e, n, 2, &indices, &local),
            ];
            let sigmas = [0, 1, 2].map(|leg| LocalOp::restrict(fam.sigma(), n, leg, &indices, &local));
            let d = indices.len();
            let mut block = WeightBlock { weight, indices, basis: Vec::new(), pivots: Vec::new(), projectors, sigmas };
            // rows of the transpose of E_1E_3 span its image
            let mut rows = Vec::with_capacity(d * d);
            for c in 0..d {
                let mut unit = vec![0; d];
                unit[c] = 1;
                rows.extend(block.project(f, &unit));
            }
            let (reduced, pivots) = Matrix::from_vec(d, d, rows).rref(f);
            if pivots.is_empty() {
                continue;
            }
            block.basis = (0..pivots.len()).map(|r| reduced.row(r).to_vec()).collect();
            block.pivots = pivots;
            blocks.push(block);
        }
        let zero = blocks
            .iter()
            .position(|b| b.weight.iter().all(|&w| w == 0))
            .ok_or_else(|| SpectralError::Degenerate("fused space has no weight-zero part".into()))?;
        Ok(FusedSpace { n, local, blocks, zero })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[WeightBlock] {
        &self.blocks
    }

    pub fn zero_block(&self) -> &WeightBlock {
        &self.blocks[self.zero]
    }

    pub fn zero_index(&self) -> usize {
        self.zero
    }

    /// `dim(W ⊗ W)`
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(WeightBlock::rank).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{sample_admissible_point, Series};
    use crate::fusion::idempotent_e;
    use crate::rep::build_rep;

    #[test]
    fn weights_pair_up() {
        assert_eq!(basis_weight(5, 0), vec![1, 0]);
        assert_eq!(basis_weight(5, 2), vec![0, 0]);
        assert_eq!(basis_weight(5, 4), vec![-1, 0]);
        assert_eq!(basis_weight(4, 2), vec![0, -1]);
        assert_eq!(tensor_weight(5, 2, 4), vec![0, 0]);
    }

    #[test]
    fn fused_space_has_full_dimension() {
        for (series, n, w) in [(Series::So, 5, 11), (Series::Sp, 4, 11)] {
            let f = PrimeField::default();
            let p = sample_admissible_point(&f, series, n, 3).unwrap();
            let fam = build_rep(series, n, &p).unwrap();
            let e = idempotent_e(&fam).unwrap();
            let space = FusedSpace::new(&fam, &e).unwrap();
            assert_eq!(space.dim(), w * w, "{series}({n})");
            let zero = space.zero_block();
            for b in zero.basis() {
                assert_eq!(&zero.project(&f, b), b);
            }
        }
    }

    #[test]
    fn braid_generators_preserve_weight() {
        let f = PrimeField::default();
        let p = sample_admissible_point(&f, Series::So, 5, 4).unwrap();
        let fam = build_rep(Series::So, 5, &p).unwrap();
        for r in 0..25 {
            for (c, _) in fam.sigma().row(r) {
                assert_eq!(tensor_weight(5, 2, r), tensor_weight(5, 2, *c));
            }
        }
    }
}
