//! The fusion idempotent `E` and the fused operator on `W ⊗ W`.
//!
//! With `w` the argument of `S` (so that `w = q^x`), the four base factors are
//! evaluated at `u = w^2`:
//!
//! `S(w) = c · E_1 E_3 R_2(q^{-2}u) R_1(u) R_3(u) R_2(q^2 u)`,
//!
//! where the scalar `c` depends on the chosen [`Normalization`].

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use super::{random_probe, FusionError, ProbeOutcome};
use crate::arith::{k_norm, EvalPoint, Field, Series};
use crate::formulas::{eval_named};
use crate::rep::{RepFamily, TwoLegOp};
use crate::report::CheckRecord;

/// Exponent of `q` in the outer argument `R_2(q^2 u)`.
pub const FUSION_SHIFT: i64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Divide by `k = [x][x-1][x+n/2][x+n/2-1]^2`.
    Printed,
    /// Divide by `k · Q^{-2}(q-q^{-1})^8 · [x+1][x+2][x+n/2-2]`, which makes `S(w)S(w^{-1}) = 1`.
    Unitary,
    Unnormalized,
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::Printed => "printed",
            Normalization::Unitary => "unitary",
            Normalization::Unnormalized => "unnormalized",
        })
    }
}

impl FromStr for Normalization {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "printed" => Ok(Normalization::Printed),
            "unitary" => Ok(Normalization::Unitary),
            "unnormalized" => Ok(Normalization::Unnormalized),
            other => Err(format!("unknown normalization {other:?}")),
        }
    }
}

/// `(q+q^{-1}) E = q - σ + (q Q^{-1} + q^{-1}) u / ([n-1]+1)`
pub fn idempotent_e<F: Field>(fam: &RepFamily<F>) -> Result<TwoLegOp<F::Elem>, FusionError> {
    let f = fam.field();
    let p = fam.point();
    let delta = fam.loop_value();
    let coef = f.div(&f.add(&f.mul(&p.q(), &p.big_q_inv()), &p.q_inv()), &delta)
        .map_err(|_| FusionError::Degenerate("[n-1]+1 = 0".into()))?;
    let norm = f.inv(&f.add(&p.q(), &p.q_inv())).map_err(|_| FusionError::Degenerate("q + 1/q = 0".into()))?;
    let e = TwoLegOp::lin_comb(
        f,
        &[(p.q(), fam.identity()), (f.neg(&f.one()), fam.sigma()), (coef, fam.contraction())],
    );
    Ok(e.scale(f, &norm))
}

/// Applies `E` on legs `(0,1), (2,3), …` of a vector on `V^{⊗k}`, `k` even.
pub fn project_fused<F: Field>(f: &F, e: &TwoLegOp<F::Elem>, k: usize, v: &[F::Elem]) -> Vec<F::Elem> {
    let mut w = v.to_vec();
    for leg in (0..k).step_by(2) {
        w = e.apply(f, k, leg, &w);
    }
    w
}

/// The fused operator on four consecutive legs.
#[derive(Debug, Clone)]
pub struct FusedOperator<E> {
    factors: Vec<(usize, TwoLegOp<E>)>,
    scale: E,
    normalization: Normalization,
}

impl<E: Clone + PartialEq + Send + Sync> FusedOperator<E> {
    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn scale(&self) -> &E {
        &self.scale
    }

    /// The two-leg factors in written order, legs relative to the first of the four.
    pub fn factors(&self) -> &[(usize, TwoLegOp<E>)] {
        &self.factors
    }

    /// Applies the operator on legs `offset..offset+4` of `V^{⊗k}`.
    pub fn apply<F: Field<Elem = E>>(&self, f: &F, k: usize, offset: usize, v: &[E]) -> Vec<E> {
        let mut w = v.to_vec();
        for (leg, op) in self.factors.iter().rev() {
            w = op.apply(f, k, offset + leg, &w);
        }
        if !f.is_one(&self.scale) {
            for x in w.iter_mut() {
                *x = f.mul(x, &self.scale);
            }
        }
        w
    }
}

pub fn fused_s<F: Field>(fam: &RepFamily<F>, wh: &F::Elem, norm: Normalization) -> Result<FusedOperator<F::Elem>, FusionError> {
    fused_s_shifted(fam, wh, norm, FUSION_SHIFT)
}

/// [`fused_s`] with the outer argument `R_2(q^{shift} u)`; only `shift = 2` is the fused operator.
pub fn fused_s_shifted<F: Field>(
    fam: &RepFamily<F>,
    wh: &F::Elem,
    norm: Normalization,
    shift: i64,
) -> Result<FusedOperator<F::Elem>, FusionError> {
    let f = fam.field();
    let p = fam.point().with_uh(wh.clone())?;
    let u = p.r_argument();
    let q = p.q();
    let e = idempotent_e(fam)?;
    let inner = f.mul(&f.pow(&q, -FUSION_SHIFT)?, &u);
    let outer = f.mul(&f.pow(&q, shift)?, &u);
    let factors = vec![
        (0, e.clone()),
        (2, e),
        (1, fam.r_op(&inner)?),
        (0, fam.r_op(&u)?),
        (2, fam.r_op(&u)?),
        (1, fam.r_op(&outer)?),
    ];
    let scale = normalization_scale(&p, norm)?;
    Ok(FusedOperator { factors, scale, normalization: norm })
}

fn normalization_scale<F: Field>(p: &EvalPoint<F>, norm: Normalization) -> Result<F::Elem, FusionError> {
    let f = p.field();
    let k = k_norm(p)?;
    let divisor = match norm {
        Normalization::Unnormalized => return Ok(f.one()),
        Normalization::Printed => k,
        Normalization::Unitary => {
            let c2 = eval_named("derived.spectral_scale", p, None)?;
            let p22 = eval_named("table_so.p22", p, None)?;
            f.mul(&f.mul(&k, &c2), &p22)
        }
    };
    f.inv(&divisor).map_err(|_| FusionError::Degenerate(format!("{norm} normalization vanishes")))
}

/// Outcome of `S(w) S(w^{-1})` on probes in `W ⊗ W`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitarityOutcome {
    pub passed: bool,
    pub probes: usize,
    pub normalization: Normalization,
    pub proportional_to_identity: bool,
    pub scalar: Option<String>,
    pub predicted_scalar: String,
    pub scalar_matches_prediction: bool,
}

/// `S(w) S(w^{-1}) = 1` on probes projected into `W ⊗ W`.
pub fn s_unitarity<F: Field>(
    fam: &RepFamily<F>,
    wh: &F::Elem,
    norm: Normalization,
    probes: usize,
    seed: u64,
) -> Result<UnitarityOutcome, FusionError> {
    let f = fam.field();
    let n = fam.n();
    let wh_inv = f.inv(wh)?;
    let s = fused_s(fam, wh, norm)?;
    let s_inv_arg = fused_s(fam, &wh_inv, norm)?;
    let e = idempotent_e(fam)?;
    let p = fam.point().with_uh(wh.clone())?;
    let base = eval_named("derived.fused_unitarity_scalar", &p, None)?;
    let predicted = match norm {
        Normalization::Unitary => f.one(),
        Normalization::Printed => base,
        Normalization::Unnormalized => f.mul(&base, &f.mul(&k_norm(&p)?, &k_norm(&p.inverted_u())?)),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scalar: Option<F::Elem> = None;
    let mut proportional = true;
    for _ in 0..probes {
        let v = project_fused(f, &e, 4, &random_probe(f, n.pow(4), &mut rng));
        let y = s.apply(f, 4, 0, &s_inv_arg.apply(f, 4, 0, &v));
        let Some(i) = v.iter().position(|x| !f.is_zero(x)) else {
            continue;
        };
        let c = f.div(&y[i], &v[i])?;
        if scalar.as_ref().is_some_and(|s| *s != c) {
            proportional = false;
        }
        let cv: Vec<F::Elem> = v.iter().map(|x| f.mul(&c, x)).collect();
        if cv != y {
            proportional = false;
        }
        scalar.get_or_insert(c);
    }
    let is_identity = proportional && scalar.as_ref().is_some_and(|c| f.is_one(c));
    Ok(UnitarityOutcome {
        passed: is_identity,
        probes,
        normalization: norm,
        proportional_to_identity: proportional,
        scalar_matches_prediction: proportional && scalar.as_ref() == Some(&predicted),
        scalar: scalar.map(|c| f.render(&c)),
        predicted_scalar: f.render(&predicted),
    })
}

/// `S_1(u) S_2(uv) S_1(v) = S_2(v) S_1(uv) S_2(u)` on probes in `W^{⊗3} ⊂ V^{⊗6}`.
pub fn ybe_residual<F: Field>(
    fam: &RepFamily<F>,
    uh: &F::Elem,
    vh: &F::Elem,
    probes: usize,
    seed: u64,
    shift: i64,
) -> Result<ProbeOutcome, FusionError> {
    let f = fam.field();
    let n = fam.n();
    let uvh = f.mul(uh, vh);
    let norm = Normalization::Printed;
    let s_u = fused_s_shifted(fam, uh, norm, shift)?;
    let s_v = fused_s_shifted(fam, vh, norm, shift)?;
    let s_uv = fused_s_shifted(fam, &uvh, norm, shift)?;
    let e = idempotent_e(fam)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for probe in 0..probes {
        let v = project_fused(f, &e, 6, &random_probe(f, n.pow(6), &mut rng));
        let lhs = s_u.apply(f, 6, 0, &s_uv.apply(f, 6, 2, &s_v.apply(f, 6, 0, &v)));
        let rhs = s_v.apply(f, 6, 2, &s_uv.apply(f, 6, 0, &s_u.apply(f, 6, 2, &v)));
        if let Some(out) = ProbeOutcome::first_difference(f, probe, &lhs, &rhs) {
            return Ok(out);
        }
    }
    Ok(ProbeOutcome::passed(probes))
}

/// `S · (1 - E_1E_3) v = 0`: the operator ignores everything outside `W ⊗ W`.
pub fn annihilates_complement<F: Field>(fam: &RepFamily<F>, wh: &F::Elem, probes: usize, seed: u64) -> Result<ProbeOutcome, FusionError> {
    let f = fam.field();
    let s = fused_s(fam, wh, Normalization::Unnormalized)?;
    let e = idempotent_e(fam)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for probe in 0..probes {
        let v = random_probe(f, fam.n().pow(4), &mut rng);
        let pv = project_fused(f, &e, 4, &v);
        let c: Vec<F::Elem> = v.iter().zip(&pv).map(|(a, b)| f.sub(a, b)).collect();
        let out = s.apply(f, 4, 0, &c);
        if let Some(o) = ProbeOutcome::first_difference(f, probe, &out, &vec![f.zero(); out.len()]) {
            return Ok(o);
        }
    }
    Ok(ProbeOutcome::passed(probes))
}

/// `S E_1E_3 v = E_1E_3 S v` on random probes.
pub fn preserves_fused_space<F: Field>(fam: &RepFamily<F>, wh: &F::Elem, probes: usize, seed: u64) -> Result<ProbeOutcome, FusionError> {
    let f = fam.field();
    let s = fused_s(fam, wh, Normalization::Unnormalized)?;
    let e = idempotent_e(fam)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for probe in 0..probes {
        let v = random_probe(f, fam.n().pow(4), &mut rng);
        let a = s.apply(f, 4, 0, &project_fused(f, &e, 4, &v));
        let b = project_fused(f, &e, 4, &s.apply(f, 4, 0, &v));
        if let Some(o) = ProbeOutcome::first_difference(f, probe, &a, &b) {
            return Ok(o);
        }
    }
    Ok(ProbeOutcome::passed(probes))
}

/// At `w = 1` the unnormalized operator acts on `W ⊗ W` as a scalar; returns it if so.
pub fn scalar_at_unit_argument<F: Field>(fam: &RepFamily<F>, probes: usize, seed: u64) -> Result<Option<F::Elem>, FusionError> {
    let f = fam.field();
    let s = fused_s(fam, &f.one(), Normalization::Unnormalized)?;
    let e = idempotent_e(fam)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scalar = None;
    for _ in 0..probes {
        let v = project_fused(f, &e, 4, &random_probe(f, fam.n().pow(4), &mut rng));
        let y = s.apply(f, 4, 0, &v);
        let i = v.iter().position(|x| !f.is_zero(x)).expect("nonzero probe");
        let c = f.div(&y[i], &v[i])?;
        if y != v.iter().map(|x| f.mul(&c, x)).collect::<Vec<_>>() || scalar.as_ref().is_some_and(|s| *s != c) {
            return Ok(None);
        }
        scalar = Some(c);
    }
    Ok(scalar)
}

fn adjoint_dimension(series: Series, n: usize) -> usize {
    match series {
        Series::So => n * (n - 1) / 2,
        Series::Sp => n * (n + 1) / 2,
    }
}

/// Idempotency and rank checks for `E` and `R(q^{-2})` on `V ⊗ V`.
pub fn idempotent_records<F: Field>(fam: &RepFamily<F>) -> Result<Vec<CheckRecord>, FusionError> {
    let f = fam.field();
    let p = fam.point();
    let n = fam.n();
    let e = idempotent_e(fam)?;
    let expected = adjoint_dimension(fam.series(), n) + 1;
    let anchor = "idempotent projecting onto the adjoint plus trivial summand";
    let mut out = Vec::new();

    out.push(CheckRecord::pass_or_fail(
        "idempotent E² = E",
        anchor,
        e.compose(f, &e) == e,
        json!({ "reading": "the generator written s_i in the display is the braid generator σ_i" }),
    ));

    let rank_e = e.to_dense(f).rank(f);
    out.push(CheckRecord::pass_or_fail(
        "rank of E",
        anchor,
        rank_e == expected,
        json!({ "rank": rank_e, "expected": expected }),
    ));

    let q_inv2 = f.pow(&p.q(), -FUSION_SHIFT)?;
    let r = fam.r_op(&q_inv2)?;
    let rank_r = r.to_dense(f).rank(f);
    out.push(CheckRecord::pass_or_fail(
        "rank of R(q^-2)",
        "rank condition on R(q^-2): image adjoint plus trivial",
        rank_r == expected,
        json!({ "rank": rank_r, "kernel": n * n - rank_r, "expected_rank": expected }),
    ));

    // R(q^-2) takes the values λ_e = a e + b/e + c on the σ-eigenspaces; it vanishes on
    // the q-eigenspace, so E = 1 - (R - λ_2)(R - λ_3)/(λ_2 λ_3).
    let [a, b, c] = fam.r_coefficients(&q_inv2)?;
    let lambdas: Vec<F::Elem> = fam
        .eigenvalues()
        .iter()
        .map(|ev| Ok(f.add(&f.add(&f.mul(&a, ev), &f.mul(&b, &f.inv(ev)?)), &c)))
        .collect::<Result<_, FusionError>>()?;
    let id = fam.identity();
    let shifted = |l: &F::Elem| TwoLegOp::lin_comb(f, &[(f.one(), &r), (f.neg(l), id)]);
    let prod = shifted(&lambdas[1]).compose(f, &shifted(&lambdas[2]));
    let denom = f.mul(&lambdas[1], &lambdas[2]);
    let poly_e = match f.inv(&denom) {
        Ok(di) => Some(TwoLegOp::lin_comb(f, &[(f.one(), id), (f.neg(&di), &prod)])),
        Err(_) => None,
    };
    let agrees = f.is_zero(&lambdas[0]) && poly_e.as_ref() == Some(&e);
    out.push(CheckRecord::pass_or_fail(
        "E as a polynomial in R(q^-2)",
        anchor,
        agrees,
        json!({
            "r_eigenvalues": lambdas.iter().map(|l| f.render(l)).collect::<Vec<_>>(),
            "polynomial": "1 - (R - λ₂)(R - λ₃)/(λ₂λ₃)",
        }),
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{sample_admissible_point, PrimeField};
    use crate::fusion::{compare_on_probes, word_operator, SpectralWord, WordOperator};
    use crate::rep::build_rep;
    use crate::report::Verdict;

    fn family(series: Series, n: u32, seed: u64) -> RepFamily<PrimeField> {
        let f = PrimeField::default();
        let p = sample_admissible_point(&f, series, n, seed).unwrap();
        build_rep(series, n, &p).unwrap()
    }

    #[test]
    fn idempotent_checks_pass() {
        for (series, n) in [(Series::So, 9), (Series::Sp, 8), (Series::So, 6)] {
            for rec in idempotent_records(&family(series, n, 4)).unwrap() {
                assert_eq!(rec.verdict, Verdict::Pass, "{series}({n}) {rec:?}");
            }
        }
    }

    #[test]
    fn six_factor_product_is_the_longest_word() {
        let fam = family(Series::So, 5, 8);
        let f = fam.field();
        let p = fam.point();
        let u = p.r_argument();
        let v = f.pow(&p.q(), -2).unwrap();
        let params = vec![f.one(), v, u, f.mul(&u, &v)];
        let fusion_word = SpectralWord::new(4, vec![1, 3, 2, 1, 3, 2], params.clone()).unwrap();
        let other_word = SpectralWord::new(4, vec![1, 2, 1, 3, 2, 1], params).unwrap();
        let s = fused_s(&fam, p.uh(), Normalization::Unnormalized).unwrap();
        let mut factors = vec![(0, fam.r_op(&v).unwrap()), (2, fam.r_op(&v).unwrap())];
        factors.extend(s.factors()[2..].iter().cloned());
        let explicit = WordOperator { k: 4, factors };
        let a = word_operator(&fam, &fusion_word).unwrap();
        let b = word_operator(&fam, &other_word).unwrap();
        assert!(compare_on_probes(f, 5, &explicit, &a, 3, 1).passed);
        assert!(compare_on_probes(f, 5, &explicit, &b, 3, 2).passed);
    }

    #[test]
    fn fused_space_is_preserved_and_complement_killed() {
        let fam = family(Series::So, 5, 9);
        let wh = *fam.point().uh();
        assert!(annihilates_complement(&fam, &wh, 3, 1).unwrap().passed);
        assert!(preserves_fused_space(&fam, &wh, 3, 2).unwrap().passed);
        assert!(scalar_at_unit_argument(&fam, 3, 3).unwrap().is_some());
    }

    #[test]
    fn unitarity_by_normalization() {
        let fam = family(Series::So, 5, 10);
        let wh = *fam.point().uh();
        let printed = s_unitarity(&fam, &wh, Normalization::Printed, 2, 1).unwrap();
        assert!(!printed.passed);
        assert!(printed.proportional_to_identity && printed.scalar_matches_prediction);
        let unitary = s_unitarity(&fam, &wh, Normalization::Unitary, 2, 1).unwrap();
        assert!(unitary.passed, "{unitary:?}");
        let raw = s_unitarity(&fam, &wh, Normalization::Unnormalized, 2, 1).unwrap();
        assert!(!raw.passed && raw.scalar_matches_prediction);
    }

    #[test]
    fn printed_normalization_vanishes_at_unit_argument() {
        let fam = family(Series::So, 5, 11);
        let one = fam.field().one();
        assert!(matches!(fused_s(&fam, &one, Normalization::Printed), Err(FusionError::Degenerate(_))));
    }

    #[test]
    fn fused_ybe_small_rank() {
        let fam = family(Series::So, 4, 12);
        let f = fam.field();
        let p2 = sample_admissible_point(f, Series::So, 4, 99).unwrap();
        let (uh, vh) = (*fam.point().uh(), *p2.uh());
        assert!(ybe_residual(&fam, &uh, &vh, 2, 5, FUSION_SHIFT).unwrap().passed);
        assert!(!ybe_residual(&fam, &uh, &vh, 2, 5, 3).unwrap().passed);
    }
}
