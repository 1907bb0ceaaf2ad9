//! Operators attached to permutations through reduced words.
//!
//! A word `s_{i_1} … s_{i_m}` is read right to left. Strand labels start in
//! positions `1..k`; at `s_i` the strands `r` and `s` in positions `i`, `i+1`
//! cross, contributing `R_i(u_s/u_r)`, and then trade places. The operator is
//! the product of the factors in the order the letters are written.

use std::collections::{BTreeSet, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{random_probe, FusionError, ProbeOutcome};
use crate::arith::Field;
use crate::rep::{LegFactor, RepFamily, TwoLegOp};

/// A word in the simple transpositions `s_1 … s_{k-1}` with one spectral parameter per strand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralWord<E> {
    k: usize,
    letters: Vec<usize>,
    params: Vec<E>,
}

impl<E: Clone> SpectralWord<E> {
    /// `letters` are generator indices in `1..k`.
    pub fn new(k: usize, letters: Vec<usize>, params: Vec<E>) -> Result<Self, FusionError> {
        if params.len() != k {
            return Err(FusionError::InvalidWord(format!("{} strand parameters for {k} strands", params.len())));
        }
        if let Some(&bad) = letters.iter().find(|&&i| i == 0 || i >= k) {
            return Err(FusionError::InvalidWord(format!("generator s_{bad} outside S({k})")));
        }
        Ok(SpectralWord { k, letters, params })
    }

    pub fn strands(&self) -> usize {
        self.k
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    /// Final arrangement of strand labels (1-based), i.e. the permutation.
    pub fn permutation(&self) -> Vec<usize> {
        permutation_of(self.k, &self.letters)
    }

    /// True iff no two strands cross twice.
    pub fn is_reduced(&self) -> bool {
        let mut pos: Vec<usize> = (1..=self.k).collect();
        let mut seen = BTreeSet::new();
        for &i in self.letters.iter().rev() {
            let (r, s) = (pos[i - 1], pos[i]);
            if !seen.insert((r.min(s), r.max(s))) {
                return false;
            }
            pos.swap(i - 1, i);
        }
        true
    }

    /// The crossing factors in written order: `(generator, strand r, strand s)`.
    pub fn crossings(&self) -> Vec<(usize, usize, usize)> {
        let mut pos: Vec<usize> = (1..=self.k).collect();
        let mut out = Vec::with_capacity(self.letters.len());
        for &i in self.letters.iter().rev() {
            out.push((i, pos[i - 1], pos[i]));
            pos.swap(i - 1, i);
        }
        out.reverse();
        out
    }

    pub fn without_letter(&self, idx: usize) -> Self {
        let mut letters = self.letters.clone();
        letters.remove(idx);
        SpectralWord { k: self.k, letters, params: self.params.clone() }
    }
}

pub fn permutation_of(k: usize, letters: &[usize]) -> Vec<usize> {
    let mut pos: Vec<usize> = (1..=k).collect();
    for &i in letters.iter().rev() {
        pos.swap(i - 1, i);
    }
    pos
}

/// A product of two-leg operators on `V^{⊗k}`, leftmost applied last.
#[derive(Debug, Clone)]
pub struct WordOperator<E> {
    pub k: usize,
    pub factors: Vec<(usize, TwoLegOp<E>)>,
}

impl<E: Clone + PartialEq + Send + Sync> WordOperator<E> {
    pub fn apply<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        let factors: Vec<LegFactor<'_, E>> = self.factors.iter().map(|(leg, op)| LegFactor { leg: *leg, op }).collect();
        crate::rep::apply_product(f, self.k, &factors, v)
    }

    pub fn without_factor(&self, idx: usize) -> Self {
        let mut factors = self.factors.clone();
        factors.remove(idx);
        WordOperator { k: self.k, factors }
    }
}

/// Builds the operator of a reduced word.
pub fn word_operator<F: Field>(fam: &RepFamily<F>, w: &SpectralWord<F::Elem>) -> Result<WordOperator<F::Elem>, FusionError> {
    if !w.is_reduced() {
        return Err(FusionError::InvalidWord(format!("{:?} is not reduced", w.letters)));
    }
    let f = fam.field();
    let mut factors = Vec::new();
    for (i, r, s) in w.crossings() {
        let arg = f.div(&w.params[s - 1], &w.params[r - 1])?;
        factors.push((i - 1, fam.r_op(&arg)?));
    }
    Ok(WordOperator { k: w.k, factors })
}

/// Compares two operators on random dense probes of `V^{⊗k}`.
pub fn compare_on_probes<F: Field>(
    f: &F,
    n: usize,
    a: &WordOperator<F::Elem>,
    b: &WordOperator<F::Elem>,
    probes: usize,
    seed: u64,
) -> ProbeOutcome {
    assert_eq!(a.k, b.k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for p in 0..probes {
        let v = random_probe(f, n.pow(a.k as u32), &mut rng);
        let (x, y) = (a.apply(f, &v), b.apply(f, &v));
        if let Some(outcome) = ProbeOutcome::first_difference(f, p, &x, &y) {
            return outcome;
        }
    }
    ProbeOutcome::passed(probes)
}

/// Well-definedness: two reduced words of the same permutation give the same operator.
pub fn matsumoto_check<F: Field>(
    fam: &RepFamily<F>,
    word_a: &SpectralWord<F::Elem>,
    word_b: &SpectralWord<F::Elem>,
    probes: usize,
    seed: u64,
) -> Result<ProbeOutcome, FusionError> {
    if word_a.permutation() != word_b.permutation() || word_a.params != word_b.params {
        return Err(FusionError::InvalidWord("words describe different permutations or strand parameters".into()));
    }
    let a = word_operator(fam, word_a)?;
    let b = word_operator(fam, word_b)?;
    Ok(compare_on_probes(fam.field(), fam.n(), &a, &b, probes, seed))
}

/// Every reduced word of every permutation in `S(k)`, grouped by permutation.
pub fn reduced_words(k: usize) -> Vec<(Vec<usize>, Vec<Vec<usize>>)> {
    // breadth-first by length: appending s_i on the left of a reduced word stays
    // reduced iff it adds an inversion
    let identity: Vec<usize> = (1..=k).collect();
    let mut by_perm: std::collections::BTreeMap<Vec<usize>, Vec<Vec<usize>>> = Default::default();
    by_perm.insert(identity.clone(), vec![Vec::new()]);
    let mut frontier: VecDeque<Vec<usize>> = VecDeque::from([Vec::new()]);
    while let Some(word) = frontier.pop_front() {
        for i in 1..k {
            let mut longer = vec![i];
            longer.extend_from_slice(&word);
            let probe = SpectralWord { k, letters: longer.clone(), params: vec![(); k] };
            if !probe.is_reduced() {
                continue;
            }
            let perm = probe.permutation();
            let entry = by_perm.entry(perm).or_default();
            if !entry.contains(&longer) {
                entry.push(longer.clone());
                frontier.push_back(longer);
            }
        }
    }
    by_perm.into_iter().collect()
}
