//! The corner algebra `E_1E_3 · BMW(4) · E_1E_3` acting on `W ⊗ W`, and its
//! Wedderburn decomposition.
//!
//! Elements are recorded as braid words so they can be rebuilt on every weight
//! block; arithmetic inside the algebra uses structure constants computed on the
//! weight-zero block, on which the algebra acts faithfully.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::grading::{FusedSpace, WeightBlock};
use super::SpectralError;
use crate::arith::{Field, PrimeField};
use crate::fusion::FusedOperator;
use crate::linalg::{roots_with_multiplicity, Matrix, Poly, SpanBuilder};

/// Longest braid word explored before the span is declared non-stabilizing.
pub const MAX_WORD_LENGTH: usize = 16;

const SPLIT_ATTEMPTS: usize = 8;

/// One simple component `M_m` of the algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgebraBlock {
    /// Eigenvalue of the random central element on this component.
    pub central_value: u64,
    /// Central idempotent in algebra coordinates.
    pub idempotent: Vec<u64>,
    /// Multiplicity space dimension.
    pub m: usize,
    /// Dimension of the matching irreducible summand of `W ⊗ W`.
    pub d: usize,
}

#[derive(Debug, Clone)]
pub struct CentralizerAlgebra {
    words: Vec<Vec<usize>>,
    /// `structure[a][b]` are the coordinates of `A_a A_b`.
    structure: Vec<Vec<Vec<u64>>>,
    unit: Vec<u64>,
    center: Vec<Vec<u64>>,
    /// Basis elements restricted to every weight block of the fused space.
    elements: Vec<Vec<Matrix<u64>>>,
    blocks: Vec<AlgebraBlock>,
    max_word_length: usize,
}

impl CentralizerAlgebra {
    pub fn dim(&self) -> usize {
        self.words.len()
    }

    /// The braid words whose corners form the basis.
    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub fn center_dim(&self) -> usize {
        self.center.len()
    }

    pub fn blocks(&self) -> &[AlgebraBlock] {
        &self.blocks
    }

    pub fn max_word_length(&self) -> usize {
        self.max_word_length
    }

    pub fn unit(&self) -> &[u64] {
        &self.unit
    }

    pub fn multiply(&self, f: &PrimeField, x: &[u64], y: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.dim()];
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| **v != 0) {
            for (b, yb) in y.iter().enumerate().filter(|(_, v)| **v != 0) {
                let c = f.mul(xa, yb);
                for (o, s) in out.iter_mut().zip(&self.structure[a][b]) {
                    *o = f.mul_add(o, &c, s);
                }
            }
        }
        out
    }

    /// The element with coordinates `x` as a matrix on weight block `block`.
    pub fn element_on(&self, f: &PrimeField, block: usize, x: &[u64]) -> Matrix<u64> {
        let mats = &self.elements[block];
        let r = mats[0].rows();
        let mut data = vec![0; r * r];
        for (c, m) in x.iter().zip(mats) {
            if *c == 0 {
                continue;
            }
            for (d, s) in data.iter_mut().zip(m.data()) {
                *d = f.mul_add(d, c, s);
            }
        }
        Matrix::from_vec(r, r, data)
    }

    /// Squares, products and sum of the central idempotents against the algebra's unit.
    pub fn idempotent_residuals(&self, f: &PrimeField) -> (bool, bool, bool) {
        let es: Vec<&Vec<u64>> = self.blocks.iter().map(|b| &b.idempotent).collect();
        let idempotent = es.iter().all(|e| self.multiply(f, e, e) == **e);
        let orthogonal = es
            .iter()
            .enumerate()
            .all(|(i, a)| es.iter().skip(i + 1).all(|b| self.multiply(f, a, b).iter().all(|x| *x == 0)));
        let mut sum = vec![0; self.dim()];
        for e in &es {
            for (s, x) in sum.iter_mut().zip(e.iter()) {
                *s = f.add(s, x);
            }
        }
        (idempotent, orthogonal, sum == self.unit)
    }

    /// True iff every product of basis elements, rebuilt on the weight-zero block, lies in the span.
    pub fn is_closed(&self, f: &PrimeField, space: &FusedSpace) -> bool {
        let z = space.zero_index();
        let mats = &self.elements[z];
        (0..self.dim()).all(|a| {
            (0..self.dim()).all(|b| mats[a].mul(f, &mats[b]) == self.element_on(f, z, &self.structure[a][b]))
        })
    }
}

fn vectorize(cols: &[Vec<u64>]) -> Vec<u64> {
    cols.concat()
}

/// Spans the corner algebra by breadth-first search over braid words.
///
/// The search runs on the left ideal `BMW(4) · E_1E_3` restricted to the
/// weight-zero block, stopping when no word of the next length adds to the span.
pub fn build_centralizer(f: &PrimeField, space: &FusedSpace) -> Result<CentralizerAlgebra, SpectralError> {
    let zero = space.zero_block();
    let r0 = zero.rank();
    let d0 = zero.ambient_dim();
    let mut ideal = SpanBuilder::new(d0 * r0);
    let mut corner = SpanBuilder::new(r0 * r0);
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut corner_mats: Vec<Matrix<u64>> = Vec::new();

    let start: Vec<Vec<u64>> = zero.basis().to_vec();
    ideal.insert(f, &vectorize(&start));
    let mut frontier = vec![(Vec::<usize>::new(), start)];
    let mut max_len = 0;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (word, cols) in frontier {
            let mat = Matrix::from_columns(r0, &cols.iter().map(|c| zero.coordinates(&zero.project(f, c))).collect::<Vec<_>>());
            if corner.insert(f, mat.data()) {
                words.push(word.clone());
                corner_mats.push(mat);
            }
            max_len = max_len.max(word.len());
            for i in 1..=3 {
                let moved: Vec<Vec<u64>> = cols.iter().map(|c| zero.sigma(f, i, c)).collect();
                if ideal.insert(f, &vectorize(&moved)) {
                    let mut longer = vec![i];
                    longer.extend_from_slice(&word);
                    next.push((longer, moved));
                }
            }
        }
        if next.first().is_some_and(|(w, _)| w.len() > MAX_WORD_LENGTH) {
            return Err(SpectralError::NotStabilized(MAX_WORD_LENGTH));
        }
        frontier = next;
    }

    let dim = words.len();
    let (structure, unit) = structure_constants(f, &corner_mats)?;
    let center = center_basis(f, &structure);
    let elements = space
        .blocks()
        .iter()
        .enumerate()
        .map(|(i, block)| {
            if i == space.zero_index() {
                corner_mats.clone()
            } else {
                words.iter().map(|w| word_corner(f, block, w)).collect()
            }
        })
        .collect();
    debug_assert_eq!(unit.len(), dim);
    Ok(CentralizerAlgebra { words, structure, unit, center, elements, blocks: Vec::new(), max_word_length: max_len })
}

fn word_corner(f: &PrimeField, block: &WeightBlock, word: &[usize]) -> Matrix<u64> {
    block.compress(f, |v| block.apply_word(f, word, v))
}

/// Solves for coordinates against a fixed basis through an invertible set of columns.
struct Coordinatizer {
    pivots: Vec<usize>,
    inverse: Matrix<u64>,
}

impl Coordinatizer {
    fn new(f: &PrimeField, basis: &[Matrix<u64>]) -> Result<Self, SpectralError> {
        let len = basis[0].data().len();
        let rows: Vec<u64> = basis.iter().flat_map(|m| m.data().iter().copied()).collect();
        let stacked = Matrix::from_vec(basis.len(), len, rows);
        let (_, pivots) = stacked.rref(f);
        if pivots.len() != basis.len() {
            return Err(SpectralError::Consistency("corner basis is dependent".into()));
        }
        let square = Matrix::from_fn(basis.len(), basis.len(), |i, j| *stacked.get(i, pivots[j]));
        let inverse = square.inverse(f).map_err(|_| SpectralError::Consistency("corner basis is dependent".into()))?;
        Ok(Coordinatizer { pivots, inverse })
    }

    fn solve(&self, f: &PrimeField, basis: &[Matrix<u64>], target: &Matrix<u64>) -> Result<Vec<u64>, SpectralError> {
        let picked: Vec<u64> = self.pivots.iter().map(|&p| target.data()[p]).collect();
        // x · square = picked  ⇒  x = picked · square⁻¹
        let dim = basis.len();
        let x: Vec<u64> = (0..dim)
            .map(|j| (0..dim).fold(0, |acc, i| f.mul_add(&acc, &picked[i], self.inverse.get(i, j))))
            .collect();
        let mut rebuilt = vec![0; target.data().len()];
        for (c, m) in x.iter().zip(basis) {
            for (r, s) in rebuilt.iter_mut().zip(m.data()) {
                *r = f.mul_add(r, c, s);
            }
        }
        if rebuilt != target.data() {
            return Err(SpectralError::Consistency("span is not closed under multiplication".into()));
        }
        Ok(x)
    }
}

type Structure = Vec<Vec<Vec<u64>>>;

fn structure_constants(f: &PrimeField, basis: &[Matrix<u64>]) -> Result<(Structure, Vec<u64>), SpectralError> {
    let solver = Coordinatizer::new(f, basis)?;
    let mut structure = Vec::with_capacity(basis.len());
    for a in basis {
        let row = basis.iter().map(|b| solver.solve(f, basis, &a.mul(f, b))).collect::<Result<Vec<_>, _>>()?;
        structure.push(row);
    }
    let unit = solver.solve(f, basis, &Matrix::identity(f, basis[0].rows()))?;
    Ok((structure, unit))
}

fn center_basis(f: &PrimeField, structure: &Structure) -> Vec<Vec<u64>> {
    let dim = structure.len();
    // z = Σ z_a A_a commutes with every A_b
    let rows = Matrix::from_fn(dim * dim, dim, |row, a| {
        let (b, c) = (row / dim, row % dim);
        f.sub(&structure[a][b][c], &structure[b][a][c])
    });
    rows.nullspace(f)
}

/// Splits the algebra into simple components with a random central element.
pub fn wedderburn_split(
    f: &PrimeField,
    space: &FusedSpace,
    mut alg: CentralizerAlgebra,
    seed: u64,
) -> Result<CentralizerAlgebra, SpectralError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = alg.dim();
    for _ in 0..SPLIT_ATTEMPTS {
        let mut z = vec![0; dim];
        for c in &alg.center {
            let t = f.sample_nonzero(&mut rng);
            for (zi, ci) in z.iter_mut().zip(c) {
                *zi = f.mul_add(zi, &t, ci);
            }
        }
        // left multiplication by z in the basis A_b
        let lz = Matrix::from_fn(dim, dim, |c, b| (0..dim).fold(0, |acc, a| f.mul_add(&acc, &z[a], &alg.structure[a][b][c])));
        let roots = roots_with_multiplicity(f, &lz.charpoly(f), &mut rng)?;
        let total: usize = roots.iter().map(|(_, m)| m).sum();
        let square_mults = roots.iter().all(|(_, m)| is_square(*m));
        if roots.len() != alg.center.len() || total != dim || !square_mults {
            continue;
        }
        let mut blocks = Vec::with_capacity(roots.len());
        for (lambda, mult) in &roots {
            let mut e = alg.unit.clone();
            for (mu, _) in roots.iter().filter(|(mu, _)| mu != lambda) {
                let shifted: Vec<u64> = z.iter().zip(&alg.unit).map(|(zi, ui)| f.sub(zi, &f.mul(mu, ui))).collect();
                let inv = f.inv(&f.sub(lambda, mu))?;
                e = alg.multiply(f, &e, &shifted).iter().map(|x| f.mul(x, &inv)).collect();
            }
            let m = (*mult as f64).sqrt().round() as usize;
            let rank: usize = (0..space.blocks().len()).map(|i| alg.element_on(f, i, &e).rank(f)).sum();
            if rank % m != 0 {
                return Err(SpectralError::Consistency(format!("idempotent rank {rank} not divisible by m = {m}")));
            }
            blocks.push(AlgebraBlock { central_value: *lambda, idempotent: e, m, d: rank / m });
        }
        alg.blocks = blocks;
        return Ok(alg);
    }
    Err(SpectralError::SplitFailed(SPLIT_ATTEMPTS))
}

fn is_square(m: usize) -> bool {
    let r = (m as f64).sqrt().round() as usize;
    r * r == m
}

/// The fused operator's characteristic polynomial on one Wedderburn block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockSpectrum {
    pub label: String,
    pub m: usize,
    pub d: usize,
    /// Monic, coefficients from low to high degree.
    pub charpoly: Vec<u64>,
}

impl BlockSpectrum {
    pub fn poly(&self, f: &PrimeField) -> Poly<u64> {
        Poly::from_coeffs(f, self.charpoly.clone())
    }
}

/// Block spectra of `S` together with the global consistency check.
#[derive(Debug, Clone)]
pub struct FusedSpectrum {
    pub blocks: Vec<BlockSpectrum>,
    /// `Π_λ χ_λ^{d_λ}` equals the characteristic polynomial of `S` on all of `W ⊗ W`.
    pub product_matches: bool,
}

/// Characteristic polynomial of `S` on each block, from the restricted polynomials
/// `charpoly(S z_λ)` on every weight space and a `d_λ`-th root.
pub fn block_charpolys(
    f: &PrimeField,
    space: &FusedSpace,
    alg: &CentralizerAlgebra,
    s: &FusedOperator<u64>,
) -> Result<FusedSpectrum, SpectralError> {
    let mut restricted: Vec<Poly<u64>> = vec![Poly::one(f); alg.blocks.len()];
    let mut full = Poly::one(f);
    for (i, block) in space.blocks().iter().enumerate() {
        let factors: Vec<_> = s.factors().iter().map(|(leg, op)| block.local(space, op, *leg)).collect();
        let sm = block
            .compress(f, |v| factors.iter().rev().fold(v.to_vec(), |acc, op| op.apply(f, &acc)))
            .scale(f, s.scale());
        full = full.mul(f, &sm.charpoly(f));
        let r = block.rank();
        for (acc, b) in restricted.iter_mut().zip(&alg.blocks) {
            let z = alg.element_on(f, i, &b.idempotent);
            let rank = z.rank(f);
            if rank == 0 {
                continue;
            }
            let cp = sm.mul(f, &z).charpoly(f).div_x_power(f, r - rank)?;
            *acc = acc.mul(f, &cp);
        }
    }
    let mut blocks = Vec::with_capacity(alg.blocks.len());
    let mut product = Poly::one(f);
    for (chi, b) in restricted.iter().zip(&alg.blocks) {
        product = product.mul(f, chi);
        let root = chi.nth_root(f, b.d as u32).map_err(|_| {
            SpectralError::Consistency(format!("restricted polynomial of the m = {} block is not a {}-th power", b.m, b.d))
        })?;
        blocks.push(BlockSpectrum { label: format!("m={}", b.m), m: b.m, d: b.d, charpoly: root.coeffs().to_vec() });
    }
    Ok(FusedSpectrum { blocks, product_matches: product == full })
}
