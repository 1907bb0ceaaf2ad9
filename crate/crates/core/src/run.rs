//! Report-producing drivers behind the `rmx` subcommands.
//!
//! Each driver samples its points from one seed, runs independent points on
//! the rayon pool and assembles records in point order, so a report depends
//! only on its inputs.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{
    admissibility_bound, resample_spectral, sample_admissible_point, ArithError, EvalPoint, Field, PrimeField, Series,
    MAX_SAMPLE_ATTEMPTS,
};
use crate::formulas::FormulaError;
use crate::fusion::{
    annihilates_complement, compare_on_probes, idempotent_records, preserves_fused_space, reduced_words,
    s_unitarity, scalar_at_unit_argument, word_operator, ybe_residual, FusionError, Normalization, SpectralWord,
    FUSION_SHIFT,
};
use crate::rep::{build_rep, relation_suite, RepError, RepFamily, TwoLegOp};
use crate::report::{CheckRecord, Verdict, VerificationReport};
use crate::spectral::{compare_to_printed, CompareSet, PointSpectra, SpectralAnalysis, SpectralError};

/// Failure of a whole run, as opposed to a failed check inside it.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RunError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("internal failure: {0}")]
    Internal(String),
}

impl RunError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) => 2,
            RunError::Degenerate(_) => 3,
            RunError::Internal(_) => 1,
        }
    }
}

impl From<ArithError> for RunError {
    fn from(e: ArithError) -> Self {
        match e {
            ArithError::Exhausted(_) | ArithError::Degenerate(_) | ArithError::DivisionByZero => {
                RunError::Degenerate(e.to_string())
            }
            ArithError::InvalidModulus(_) | ArithError::FieldTooSmall { .. } | ArithError::Parse(_) => {
                RunError::Usage(e.to_string())
            }
        }
    }
}

impl From<FormulaError> for RunError {
    fn from(e: FormulaError) -> Self {
        match e {
            FormulaError::Arith(a) => a.into(),
            FormulaError::ZeroDenominator(_) => RunError::Degenerate(e.to_string()),
            FormulaError::UnknownName(_) | FormulaError::Unsupported(_) => RunError::Usage(e.to_string()),
            other => RunError::Internal(other.to_string()),
        }
    }
}

impl From<RepError> for RunError {
    fn from(e: RepError) -> Self {
        match e {
            RepError::Arith(a) => a.into(),
            RepError::Formula(x) => x.into(),
            RepError::Degenerate(_) | RepError::Singular => RunError::Degenerate(e.to_string()),
            other => RunError::Internal(other.to_string()),
        }
    }
}

impl From<FusionError> for RunError {
    fn from(e: FusionError) -> Self {
        match e {
            FusionError::Arith(a) => a.into(),
            FusionError::Rep(r) => r.into(),
            FusionError::Formula(x) => x.into(),
            FusionError::Degenerate(_) => RunError::Degenerate(e.to_string()),
            FusionError::InvalidWord(_) => RunError::Internal(e.to_string()),
        }
    }
}

impl From<SpectralError> for RunError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::Arith(a) => a.into(),
            SpectralError::Rep(r) => r.into(),
            SpectralError::Fusion(x) => x.into(),
            SpectralError::Formula(x) => x.into(),
            SpectralError::Degenerate(_) => RunError::Degenerate(e.to_string()),
            other => RunError::Internal(other.to_string()),
        }
    }
}

/// Checks that `(series, n)` names a family this crate builds.
pub fn validate_family(series: Series, n: u32) -> Result<(), RunError> {
    if n < 3 {
        return Err(RunError::Usage(format!("n must be at least 3, got {n}")));
    }
    if series == Series::Sp && n % 2 == 1 {
        return Err(RunError::Usage(format!("sp(n) needs even n, got {n}")));
    }
    Ok(())
}

/// One independent seed per point, drawn from the run seed.
pub fn point_seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen()).collect()
}

fn tag(mut record: CheckRecord, point: usize) -> CheckRecord {
    match &mut record.payload {
        Value::Object(map) => {
            map.insert("point".into(), json!(point));
        }
        other => {
            let inner = other.take();
            record.payload = json!({ "point": point, "value": inner });
        }
    }
    record
}

fn timed<T>(timings: bool, run: impl FnOnce() -> T) -> (T, Option<u64>) {
    if !timings {
        return (run(), None);
    }
    let start = Instant::now();
    let out = run();
    (out, Some(start.elapsed().as_millis() as u64))
}

fn stamp(records: Vec<CheckRecord>, ms: Option<u64>) -> Vec<CheckRecord> {
    match ms {
        Some(ms) => records.into_iter().map(|r| r.with_wall_clock(ms)).collect(),
        None => records,
    }
}

/// Relation suite of the vector representation at `points` sampled points.
pub fn verify_rep<F: Field>(
    field: &F,
    series: Series,
    n: u32,
    points: usize,
    seed: u64,
    timings: bool,
) -> Result<VerificationReport, RunError> {
    validate_family(series, n)?;
    let seeds = point_seeds(seed, points);
    let per_point: Vec<Result<Vec<CheckRecord>, RunError>> = seeds
        .par_iter()
        .enumerate()
        .map(|(i, &s)| {
            let (records, ms) = timed(timings, || -> Result<_, RunError> {
                let p = sample_admissible_point(field, series, n, s)?;
                let fam = build_rep(series, n, &p)?;
                Ok(relation_suite(&fam)?)
            });
            Ok(stamp(records?, ms).into_iter().map(|r| tag(r, i)).collect())
        })
        .collect();
    let mut report = VerificationReport::new("verify-rep", series, n, field.backend(), seeds);
    for records in per_point {
        report.extend(records?);
    }
    Ok(report)
}

/// Subset of the fused-operator checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuseChecks {
    pub ybe: bool,
    pub unitarity: bool,
    pub idempotent: bool,
    pub matsumoto: bool,
}

impl FuseChecks {
    pub fn all() -> Self {
        FuseChecks { ybe: true, unitarity: true, idempotent: true, matsumoto: true }
    }
}

impl FromStr for FuseChecks {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut set = FuseChecks { ybe: false, unitarity: false, idempotent: false, matsumoto: false };
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            match item {
                "ybe" => set.ybe = true,
                "unitarity" => set.unitarity = true,
                "idempotent" => set.idempotent = true,
                "matsumoto" => set.matsumoto = true,
                other => return Err(format!("unknown check {other:?}")),
            }
        }
        Ok(set)
    }
}

impl fmt::Display for FuseChecks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = [
            (self.ybe, "ybe"),
            (self.unitarity, "unitarity"),
            (self.idempotent, "idempotent"),
            (self.matsumoto, "matsumoto"),
        ]
        .into_iter()
        .filter_map(|(on, name)| on.then_some(name))
        .collect();
        f.write_str(&names.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuseOptions {
    pub checks: FuseChecks,
    pub probes: usize,
    pub pairs: usize,
    pub normalization: Normalization,
    /// Deliberately corrupts every selected check; each must then fail.
    pub negative_control: bool,
    pub timings: bool,
}

impl Default for FuseOptions {
    fn default() -> Self {
        FuseOptions {
            checks: FuseChecks::all(),
            probes: 5,
            pairs: 3,
            normalization: Normalization::Printed,
            negative_control: false,
            timings: false,
        }
    }
}

type SpectralPair<F> = (<F as Field>::Elem, <F as Field>::Elem);

/// Spectral pairs `(u^{1/2}, v^{1/2})` with `u`, `v` and `uv` all admissible.
fn sample_pairs<F: Field>(base: &EvalPoint<F>, pairs: usize, seed: u64) -> Result<Vec<SpectralPair<F>>, RunError> {
    let f = base.field();
    let bound = admissibility_bound(base.n());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(pairs);
    while out.len() < pairs {
        let mut found = None;
        for _ in 0..MAX_SAMPLE_ATTEMPTS {
            let u = resample_spectral(base, &mut rng)?;
            let v = resample_spectral(base, &mut rng)?;
            let uv = f.mul(u.uh(), v.uh());
            if base.with_uh(uv).is_ok_and(|p| p.check_admissible(bound).is_ok()) {
                found = Some((u.uh().clone(), v.uh().clone()));
                break;
            }
        }
        out.push(found.ok_or(ArithError::Exhausted(MAX_SAMPLE_ATTEMPTS))?);
    }
    Ok(out)
}

fn outcome_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("outcome serializes")
}

/// Fused-operator checks at one sampled `q` and `--pairs` spectral pairs.
pub fn fuse_check<F: Field>(
    field: &F,
    series: Series,
    n: u32,
    seed: u64,
    opts: &FuseOptions,
) -> Result<VerificationReport, RunError> {
    validate_family(series, n)?;
    let seeds = point_seeds(seed, 3);
    let base = sample_admissible_point(field, series, n, seeds[0])?;
    let fam = build_rep(series, n, &base)?;
    let f = fam.field();
    let pairs = sample_pairs(&base, opts.pairs.max(1), seeds[1])?;
    let probe_seed = seeds[2];
    let mut report = VerificationReport::new("fuse-check", series, n, field.backend(), seeds);
    report.push(CheckRecord::plumbing(
        "evaluation point",
        Verdict::Derived,
        json!({
            "qh": f.render(base.qh()),
            "pairs": pairs.iter().map(|(u, v)| json!({ "uh": f.render(u), "vh": f.render(v) })).collect::<Vec<_>>(),
            "negative_control": opts.negative_control,
        }),
    ));

    if opts.checks.idempotent {
        let (records, ms) = timed(opts.timings, || idempotent_group(&fam, &pairs[0].0, opts, probe_seed));
        report.extend(stamp(records?, ms));
    }
    if opts.checks.ybe {
        let shift = if opts.negative_control { FUSION_SHIFT + 1 } else { FUSION_SHIFT };
        let results: Vec<Result<CheckRecord, RunError>> = pairs
            .par_iter()
            .enumerate()
            .take(opts.pairs)
            .map(|(j, (uh, vh))| {
                let (outcome, ms) = timed(opts.timings, || ybe_residual(&fam, uh, vh, opts.probes, probe_seed ^ j as u64, shift));
                let outcome = outcome?;
                let record = CheckRecord::pass_or_fail(
                    "fused Yang-Baxter equation",
                    "Yang-Baxter equation for the fused operator on W⊗W⊗W",
                    outcome.passed,
                    json!({
                        "pair": j,
                        "uh": f.render(uh),
                        "vh": f.render(vh),
                        "outer_shift": shift,
                        "outcome": outcome_json(&outcome),
                    }),
                );
                Ok(stamp(vec![record], ms).remove(0))
            })
            .collect();
        for r in results {
            report.push(r?);
        }
    }
    if opts.checks.unitarity {
        let norm = if opts.negative_control { Normalization::Unnormalized } else { opts.normalization };
        let results: Vec<Result<Vec<CheckRecord>, RunError>> = pairs
            .par_iter()
            .enumerate()
            .take(opts.pairs)
            .map(|(j, (wh, _))| {
                let (records, ms) = timed(opts.timings, || -> Result<_, RunError> {
                    let seed = probe_seed ^ (j as u64) << 8;
                    let main = s_unitarity(&fam, wh, norm, opts.probes, seed)?;
                    let control = s_unitarity(&fam, wh, Normalization::Unnormalized, opts.probes, seed)?;
                    Ok(vec![
                        CheckRecord::pass_or_fail(
                            "fused unitarity S(w)S(1/w) = 1",
                            "unitarity of the fused operator",
                            main.passed,
                            json!({ "pair": j, "wh": f.render(wh), "outcome": outcome_json(&main) }),
                        ),
                        CheckRecord::pass_or_fail(
                            "unnormalized product is not the identity",
                            "unitarity of the fused operator",
                            !control.passed,
                            json!({ "pair": j, "wh": f.render(wh), "outcome": outcome_json(&control) }),
                        ),
                    ])
                });
                Ok(stamp(records?, ms))
            })
            .collect();
        for r in results {
            report.extend(r?);
        }
    }
    if opts.checks.matsumoto {
        let (records, ms) = timed(opts.timings, || matsumoto_group(&fam, opts, probe_seed));
        report.extend(stamp(records?, ms));
    }
    Ok(report)
}

fn idempotent_group<F: Field>(
    fam: &RepFamily<F>,
    wh: &F::Elem,
    opts: &FuseOptions,
    seed: u64,
) -> Result<Vec<CheckRecord>, RunError> {
    let f = fam.field();
    let anchor = "fused operator on the adjoint plus trivial summand";
    let mut out = if opts.negative_control {
        // (q - σ)/(q + q^{-1}) without the contraction term
        let p = fam.point();
        let c = f.inv(&f.add(&p.q(), &p.q_inv()))?;
        let wrong = TwoLegOp::lin_comb(f, &[(f.mul(&c, &p.q()), fam.identity()), (f.neg(&c), fam.sigma())]);
        vec![CheckRecord::pass_or_fail(
            "idempotent E² = E",
            "idempotent projecting onto the adjoint plus trivial summand",
            wrong.compose(f, &wrong) == wrong,
            json!({ "negative_control": "contraction term dropped from E" }),
        )]
    } else {
        idempotent_records(fam)?
    };
    let pres = preserves_fused_space(fam, wh, opts.probes, seed)?;
    out.push(CheckRecord::pass_or_fail(
        "S commutes with the projection onto W⊗W",
        anchor,
        pres.passed,
        json!({ "wh": f.render(wh), "outcome": outcome_json(&pres) }),
    ));
    let ann = annihilates_complement(fam, wh, opts.probes, seed)?;
    out.push(CheckRecord::pass_or_fail(
        "S vanishes off W⊗W",
        anchor,
        ann.passed,
        json!({ "wh": f.render(wh), "outcome": outcome_json(&ann) }),
    ));
    let unit = scalar_at_unit_argument(fam, opts.probes, seed)?;
    out.push(CheckRecord::new(
        "unnormalized operator at w = 1",
        "derived",
        if unit.is_some() { Verdict::Derived } else { Verdict::Fail },
        json!({
            "acts_as_scalar": unit.is_some(),
            "scalar": unit.map(|c| f.render(&c)),
        }),
    ));
    Ok(out)
}

/// All reduced words of the longest element of `S(k)`: the first against each other one.
fn longest_word_pairs(k: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let longest: Vec<usize> = (1..=k).rev().collect();
    let words = reduced_words(k)
        .into_iter()
        .find(|(perm, _)| *perm == longest)
        .map(|(_, words)| words)
        .unwrap_or_default();
    words.iter().skip(1).map(|w| (words[0].clone(), w.clone())).collect()
}

fn matsumoto_group<F: Field>(fam: &RepFamily<F>, opts: &FuseOptions, seed: u64) -> Result<Vec<CheckRecord>, RunError> {
    let f = fam.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for k in [3usize, 4] {
        let pairs = longest_word_pairs(k);
        let (a, b, params) = 'draw: {
            for _ in 0..MAX_SAMPLE_ATTEMPTS {
                let params: Vec<F::Elem> = (0..k).map(|_| f.sample_nonzero(&mut rng)).collect();
                let ops: Result<Vec<_>, _> = pairs
                    .iter()
                    .map(|(x, y)| -> Result<_, FusionError> {
                        let wa = SpectralWord::new(k, x.clone(), params.clone())?;
                        let wb = SpectralWord::new(k, y.clone(), params.clone())?;
                        Ok((word_operator(fam, &wa)?, word_operator(fam, &wb)?))
                    })
                    .collect();
                if let Ok(ops) = ops {
                    let (a, b): (Vec<_>, Vec<_>) = ops.into_iter().unzip();
                    break 'draw (a, b, params);
                }
            }
            return Err(ArithError::Exhausted(MAX_SAMPLE_ATTEMPTS).into());
        };
        for (i, ((wa, wb), (oa, ob))) in pairs.iter().zip(a.iter().zip(&b)).enumerate() {
            let ob = if opts.negative_control { ob.without_factor(ob.factors.len() - 1) } else { ob.clone() };
            let outcome = compare_on_probes(f, fam.n(), oa, &ob, opts.probes, seed ^ ((k as u64) << 16 | i as u64));
            out.push(CheckRecord::pass_or_fail(
                "reduced words of the longest element agree",
                "well-definedness of reduced-word operators",
                outcome.passed,
                json!({
                    "strands": k,
                    "word_a": wa,
                    "word_b": wb,
                    "strand_parameters": params.iter().map(|x| f.render(x)).collect::<Vec<_>>(),
                    "outcome": outcome_json(&outcome),
                }),
            ));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectrumOptions {
    pub points: usize,
    pub compare: CompareSet,
    pub trials: usize,
    pub timings: bool,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions { points: 3, compare: CompareSet::all(), trials: 8, timings: false }
    }
}

const EXPECTED_ALGEBRA_DIM: usize = 17;
const EXPECTED_MULTIPLICITIES: [usize; 6] = [3, 2, 1, 1, 1, 1];

fn spectrum_point(
    field: &PrimeField,
    series: Series,
    n: u32,
    seed: u64,
    opts: &SpectrumOptions,
) -> Result<Vec<CheckRecord>, RunError> {
    let p = sample_admissible_point(field, series, n, seed)?;
    let fam = build_rep(series, n, &p)?;
    let f = fam.field();
    let analysis = SpectralAnalysis::new(&fam, seed)?;
    let space = analysis.space();
    let alg = analysis.algebra();
    let mut out = vec![CheckRecord::plumbing(
        "evaluation point",
        Verdict::Derived,
        json!({ "qh": f.render(p.qh()), "uh": f.render(p.uh()), "Qh": f.render(p.big_qh()) }),
    )];

    let (idem, orth, sum) = alg.idempotent_residuals(f);
    out.push(CheckRecord::pass_or_fail(
        "central idempotents of the centralizer",
        "plumbing",
        idem && orth && sum && alg.is_closed(f, space),
        json!({
            "idempotent": idem,
            "orthogonal": orth,
            "sum_to_unit": sum,
            "max_word_length": alg.max_word_length(),
            "center_dim": alg.center_dim(),
        }),
    ));
    let mut mults: Vec<usize> = alg.blocks().iter().map(|b| b.m).collect();
    mults.sort_unstable_by(|a, b| b.cmp(a));
    out.push(CheckRecord::pass_or_fail(
        "dimension and block multiplicities of the centralizer",
        "centralizer of the fused space",
        alg.dim() == EXPECTED_ALGEBRA_DIM && mults == EXPECTED_MULTIPLICITIES,
        json!({ "dim": alg.dim(), "multiplicities": mults, "expected_dim": EXPECTED_ALGEBRA_DIM }),
    ));
    let weighted: usize = alg.blocks().iter().map(|b| b.m * b.d).sum();
    out.push(CheckRecord::pass_or_fail(
        "block dimensions account for W⊗W",
        "centralizer of the fused space",
        weighted == space.dim(),
        json!({
            "sum_m_times_d": weighted,
            "fused_dim": space.dim(),
            "weight_blocks": space.blocks().len(),
            "zero_weight_rank": space.zero_block().rank(),
        }),
    ));

    let at_w = analysis.spectrum(&fam, p.uh(), Normalization::Printed)?;
    let inv = f.inv(p.uh())?;
    let at_inv = analysis.spectrum(&fam, &inv, Normalization::Printed)?;
    out.push(CheckRecord::pass_or_fail(
        "restricted polynomials are perfect powers and multiply to the full one",
        "plumbing",
        at_w.product_matches && at_inv.product_matches,
        json!({ "at_w": at_w.product_matches, "at_inverse": at_inv.product_matches }),
    ));
    let cmp = compare_to_printed(
        PointSpectra { point: &p, blocks: &at_w.blocks, inverse: Some(&at_inv.blocks) },
        opts.compare,
        opts.trials,
        seed,
    )?;
    out.push(CheckRecord::new(
        "block spectra of S(w)",
        "derived",
        Verdict::Derived,
        json!({
            "normalization": Normalization::Printed,
            "blocks": cmp
                .labeled
                .iter()
                .map(|b| json!({
                    "label": b.label,
                    "m": b.m,
                    "d": b.d,
                    "charpoly": b.charpoly.iter().map(|c| f.render(c)).collect::<Vec<_>>(),
                }))
                .collect::<Vec<_>>(),
        }),
    ));
    out.extend(cmp.records);
    Ok(out)
}

/// Centralizer structure, block spectra and comparison at `points` sampled points.
pub fn spectrum(
    field: &PrimeField,
    series: Series,
    n: u32,
    seed: u64,
    opts: &SpectrumOptions,
) -> Result<VerificationReport, RunError> {
    validate_family(series, n)?;
    let seeds = point_seeds(seed, opts.points);
    let per_point: Vec<Result<Vec<CheckRecord>, RunError>> = seeds
        .par_iter()
        .enumerate()
        .map(|(i, &s)| {
            let (records, ms) = timed(opts.timings, || spectrum_point(field, series, n, s, opts));
            Ok(stamp(records?, ms).into_iter().map(|r| tag(r, i)).collect())
        })
        .collect();
    let mut report = VerificationReport::new("spectrum", series, n, field.backend(), seeds);
    for records in per_point {
        report.extend(records?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_sets_round_trip() {
        let c: FuseChecks = "ybe,matsumoto".parse().unwrap();
        assert!(c.ybe && c.matsumoto && !c.unitarity && !c.idempotent);
        assert_eq!(c.to_string(), "ybe,matsumoto");
        assert!("ybe,bogus".parse::<FuseChecks>().is_err());
    }

    #[test]
    fn longest_words_cover_all_reduced_words() {
        assert_eq!(longest_word_pairs(3).len(), 1);
        assert_eq!(longest_word_pairs(4).len(), 15);
    }

    #[test]
    fn small_n_is_a_usage_error() {
        let f = PrimeField::default();
        let err = verify_rep(&f, Series::So, 2, 1, 1, false).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert_eq!(validate_family(Series::Sp, 7).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn verify_rep_is_deterministic() {
        let f = PrimeField::default();
        let a = verify_rep(&f, Series::So, 5, 2, 9, false).unwrap().to_json();
        let b = verify_rep(&f, Series::So, 5, 2, 9, false).unwrap().to_json();
        assert_eq!(a, b);
        assert!(!a.contains("wall_clock_ms"));
    }
}
