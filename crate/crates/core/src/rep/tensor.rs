//! Operators on two adjacent legs of `V^{⊗k}`, applied lazily.
//!
//! Multi-indices are big-endian: leg 0 is the most significant digit, so the
//! basis vector `e_{d_0} ⊗ … ⊗ e_{d_{k-1}}` sits at `Σ d_j n^{k-1-j}`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::RepError;
use crate::arith::Field;
use crate::linalg::Matrix;

/// A sparse operator on `V ⊗ V`, stored by rows and by columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoLegOp<E> {
    n: usize,
    rows: Vec<Vec<(usize, E)>>,
    cols: Vec<Vec<(usize, E)>>,
}

/// Sparse vector on `V^{⊗k}` keyed by multi-index.
pub type SparseVec<E> = BTreeMap<usize, E>;

impl<E: Clone + PartialEq + Send + Sync> TwoLegOp<E> {
    fn from_rows(n: usize, rows: Vec<Vec<(usize, E)>>) -> Self {
        let mut cols = vec![Vec::new(); n * n];
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row {
                cols[*c].push((r, v.clone()));
            }
        }
        TwoLegOp { n, rows, cols }
    }

    pub fn from_dense<F: Field<Elem = E>>(f: &F, n: usize, m: &Matrix<E>) -> Self {
        assert_eq!((m.rows(), m.cols()), (n * n, n * n), "two-leg operator shape");
        let rows = (0..n * n)
            .map(|r| {
                m.row(r)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !f.is_zero(v))
                    .map(|(c, v)| (c, v.clone()))
                    .collect()
            })
            .collect();
        Self::from_rows(n, rows)
    }

    pub fn from_entries<F: Field<Elem = E>>(f: &F, n: usize, entries: impl IntoIterator<Item = (usize, usize, E)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, E>> = vec![BTreeMap::new(); n * n];
        for (r, c, v) in entries {
            let slot = acc[r].entry(c).or_insert_with(|| f.zero());
            *slot = f.add(slot, &v);
        }
        let rows = acc
            .into_iter()
            .map(|row| row.into_iter().filter(|(_, v)| !f.is_zero(v)).collect())
            .collect();
        Self::from_rows(n, rows)
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        Self::from_entries(f, n, (0..n * n).map(|i| (i, i, f.one())))
    }

    /// The flip `e_a ⊗ e_b ↦ e_b ⊗ e_a`.
    pub fn flip<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        Self::from_entries(f, n, (0..n).flat_map(|a| (0..n).map(move |b| (b * n + a, a * n + b))).map(|(r, c)| (r, c, f.one())))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, E)] {
        &self.rows[r]
    }

    pub fn col(&self, c: usize) -> &[(usize, E)] {
        &self.cols[c]
    }

    pub fn to_dense<F: Field<Elem = E>>(&self, f: &F) -> Matrix<E> {
        let d = self.n * self.n;
        let mut m = Matrix::zeros(f, d, d);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                m.set(r, *c, v.clone());
            }
        }
        m
    }

    /// `Σ c_i · op_i`
    pub fn lin_comb<F: Field<Elem = E>>(f: &F, terms: &[(E, &Self)]) -> Self {
        let n = terms.first().map(|(_, op)| op.n).expect("at least one term");
        let entries = terms.iter().flat_map(|(c, op)| {
            op.rows.iter().enumerate().flat_map(move |(r, row)| row.iter().map(move |(col, v)| (r, *col, f.mul(c, v))))
        });
        Self::from_entries(f, n, entries.collect::<Vec<_>>())
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        Self::lin_comb(f, &[(c.clone(), self)])
    }

    /// `self ∘ other`
    pub fn compose<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut entries = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            for (k, a) in row {
                for (c, b) in &other.rows[*k] {
                    entries.push((r, *c, f.mul(a, b)));
                }
            }
        }
        Self::from_entries(f, self.n, entries)
    }

    /// Inverse computed block by block over the connected components of the sparsity graph.
    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Result<Self, RepError> {
        let d = self.n * self.n;
        let mut parent: Vec<usize> = (0..d).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for (r, row) in self.rows.iter().enumerate() {
            for (c, _) in row {
                let (a, b) = (find(&mut parent, r), find(&mut parent, *c));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..d {
            let root = find(&mut parent, i);
            comps.entry(root).or_default().push(i);
        }
        let mut entries = Vec::new();
        for idx in comps.values() {
            let local: BTreeMap<usize, usize> = idx.iter().enumerate().map(|(k, &g)| (g, k)).collect();
            let mut block = Matrix::zeros(f, idx.len(), idx.len());
            for (k, &g) in idx.iter().enumerate() {
                for (c, v) in &self.rows[g] {
                    block.set(k, local[c], v.clone());
                }
            }
            let inv = block.inverse(f).map_err(|_| RepError::Singular)?;
            for (i, &gi) in idx.iter().enumerate() {
                for (j, &gj) in idx.iter().enumerate() {
                    let v = inv.get(i, j);
                    if !f.is_zero(v) {
                        entries.push((gi, gj, v.clone()));
                    }
                }
            }
        }
        Ok(Self::from_entries(f, self.n, entries))
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.rows.iter().all(|row| row.iter().all(|(_, v)| f.is_zero(v)))
    }

    /// Applies the operator on legs `(leg, leg+1)` of a dense vector on `V^{⊗k}`.
    pub fn apply<F: Field<Elem = E>>(&self, f: &F, k: usize, leg: usize, v: &[E]) -> Vec<E> {
        let n = self.n;
        assert!(leg + 1 < k, "leg {leg} out of range for {k} legs");
        assert_eq!(v.len(), n.pow(k as u32), "vector length");
        let inner = n.pow((k - leg - 2) as u32);
        let nn = n * n;
        let mut out = vec![f.zero(); v.len()];
        let min_len = (4096 / inner).max(1);
        out.par_chunks_mut(inner).enumerate().with_min_len(min_len).for_each(|(block, chunk)| {
            let outer = block / nn;
            let r = block % nn;
            for (c, coef) in &self.rows[r] {
                let src = &v[(outer * nn + c) * inner..(outer * nn + c + 1) * inner];
                for (o, s) in chunk.iter_mut().zip(src) {
                    *o = f.mul_add(o, coef, s);
                }
            }
        });
        out
    }

    /// Applies the operator on legs `(leg, leg+1)` of a sparse vector on `V^{⊗k}`.
    pub fn apply_sparse<F: Field<Elem = E>>(&self, f: &F, k: usize, leg: usize, v: &SparseVec<E>) -> SparseVec<E> {
        let n = self.n;
        let inner = n.pow((k - leg - 2) as u32);
        let nn = n * n;
        let mut out: SparseVec<E> = BTreeMap::new();
        for (idx, x) in v {
            let t = idx % inner;
            let c = (idx / inner) % nn;
            let outer = idx / (inner * nn);
            for (r, coef) in &self.cols[c] {
                let target = (outer * nn + r) * inner + t;
                let slot = out.entry(target).or_insert_with(|| f.zero());
                *slot = f.mul_add(slot, coef, x);
            }
        }
        out.retain(|_, x| !f.is_zero(x));
        out
    }
}

/// A two-leg operator placed on legs `(leg, leg+1)`.
#[derive(Debug, Clone, Copy)]
pub struct LegFactor<'a, E> {
    pub leg: usize,
    pub op: &'a TwoLegOp<E>,
}

/// Applies `factors[0] · factors[1] · … · factors[last]` to `v`, rightmost first.
pub fn apply_product<F: Field>(f: &F, k: usize, factors: &[LegFactor<'_, F::Elem>], v: &[F::Elem]) -> Vec<F::Elem> {
    let mut w = v.to_vec();
    for fac in factors.iter().rev() {
        w = fac.op.apply(f, k, fac.leg, &w);
    }
    w
}

/// Sparse counterpart of [`apply_product`].
pub fn apply_product_sparse<F: Field>(
    f: &F,
    k: usize,
    factors: &[LegFactor<'_, F::Elem>],
    v: &SparseVec<F::Elem>,
) -> SparseVec<F::Elem> {
    let mut w = v.clone();
    for fac in factors.iter().rev() {
        w = fac.op.apply_sparse(f, k, fac.leg, &w);
    }
    w
}

pub fn sparse_scale<F: Field>(f: &F, c: &F::Elem, v: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
    v.iter().map(|(i, x)| (*i, f.mul(c, x))).filter(|(_, x)| !f.is_zero(x)).collect()
}

pub fn sparse_sub<F: Field>(f: &F, a: &SparseVec<F::Elem>, b: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
    let mut out = a.clone();
    for (i, x) in b {
        let slot = out.entry(*i).or_insert_with(|| f.zero());
        *slot = f.sub(slot, x);
    }
    out.retain(|_, x| !f.is_zero(x));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::PrimeField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_op(f: &PrimeField, n: usize, seed: u64) -> TwoLegOp<u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Matrix::from_fn(n * n, n * n, |i, j| if (i + 2 * j) % 3 == 0 { f.sample_nonzero(&mut rng) } else { 0 });
        TwoLegOp::from_dense(f, n, &m)
    }

    fn kron_embed(f: &PrimeField, n: usize, k: usize, leg: usize, op: &TwoLegOp<u64>) -> Matrix<u64> {
        let left = n.pow(leg as u32);
        let right = n.pow((k - leg - 2) as u32);
        let d = op.to_dense(f);
        let big = n.pow(k as u32);
        Matrix::from_fn(big, big, |r, c| {
            let (ro, rm, ri) = (r / (n * n * right), (r / right) % (n * n), r % right);
            let (co, cm, ci) = (c / (n * n * right), (c / right) % (n * n), c % right);
            if ro == co && ri == ci && ro < left {
                *d.get(rm, cm)
            } else {
                0
            }
        })
    }

    #[test]
    fn lazy_application_matches_kronecker_embedding() {
        let f = PrimeField::default();
        let (n, k) = (3, 4);
        let op = random_op(&f, n, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let v: Vec<u64> = (0..n.pow(k as u32)).map(|_| f.sample_nonzero(&mut rng)).collect();
        for leg in 0..k - 1 {
            let dense = kron_embed(&f, n, k, leg, &op).mul_vec(&f, &v);
            assert_eq!(op.apply(&f, k, leg, &v), dense);
            let sparse: SparseVec<u64> = v.iter().copied().enumerate().collect();
            let got = op.apply_sparse(&f, k, leg, &sparse);
            let want: SparseVec<u64> = dense.into_iter().enumerate().filter(|(_, x)| *x != 0).collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn inverse_and_composition() {
        let f = PrimeField::default();
        let n = 3;
        let flip = TwoLegOp::flip(&f, n);
        let id = TwoLegOp::identity(&f, n);
        assert_eq!(flip.compose(&f, &flip), id);
        let op = TwoLegOp::lin_comb(&f, &[(2, &id), (5, &flip)]);
        let inv = op.inverse(&f).unwrap();
        assert_eq!(op.compose(&f, &inv), id);
        let zero = TwoLegOp::lin_comb(&f, &[(1, &id), (f.neg(&1), &id)]);
        assert!(zero.is_zero(&f));
        assert_eq!(zero.nnz(), 0);
    }
}
