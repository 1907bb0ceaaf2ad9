//! Acceptance run: one PASS/FAIL line per criterion, exact arithmetic throughout.
//!
//! Criteria listed in `KNOWN_RED` fail against the printed formulas; their
//! detail lines carry the computed evidence. The process exits non-zero when
//! any outcome differs from that list, or on any FAIL when
//! `RMX_ACCEPTANCE_STRICT=1`.

use std::process::ExitCode;
use std::time::Instant;

use rmx_core::arith::{sample_admissible_point, PrimeField, Series};
use rmx_core::formulas::{catalog_get, identity_test, parse_expr, universal_params_for, IdentityVerdict, Side};
use rmx_core::fusion::{idempotent_records, FusionError, Normalization};
use rmx_core::rep::build_rep;
use rmx_core::report::{Verdict, VerificationReport};
use rmx_core::run::{self, FuseChecks, FuseOptions, RunError, SpectrumOptions};

const KNOWN_RED: [usize; 3] = [5, 7, 8];
const POINTS: usize = 3;

struct Outcome {
    id: usize,
    title: &'static str,
    pass: bool,
    details: Vec<String>,
}

impl Outcome {
    fn new(id: usize, title: &'static str) -> Self {
        Outcome { id, title, pass: true, details: Vec::new() }
    }

    fn check(&mut self, ok: bool, detail: impl Into<String>) {
        self.pass &= ok;
        let mark = if ok { "ok  " } else { "FAIL" };
        self.details.push(format!("{mark} {}", detail.into()));
    }

    fn note(&mut self, detail: impl Into<String>) {
        self.details.push(format!("     {}", detail.into()));
    }

    fn error(id: usize, title: &'static str, e: impl std::fmt::Display) -> Self {
        let mut o = Outcome::new(id, title);
        o.check(false, format!("run aborted: {e}"));
        o
    }
}

fn verdicts(report: &VerificationReport, name: &str) -> Vec<Verdict> {
    report.find(name).map(|r| r.verdict).collect()
}

fn all_pass(report: &VerificationReport, name: &str, expected: usize) -> (bool, String) {
    let v = verdicts(report, name);
    let passed = v.iter().filter(|&&x| x == Verdict::Pass).count();
    (v.len() == expected && passed == expected, format!("{name}: {passed}/{expected} PASS"))
}

fn field() -> PrimeField {
    PrimeField::default()
}

fn criterion_1() -> Result<Outcome, RunError> {
    let mut o = Outcome::new(1, "relation suite of the braid generator");
    let start = Instant::now();
    for (series, n) in [(Series::So, 9), (Series::So, 11), (Series::Sp, 8)] {
        let report = run::verify_rep(&field(), series, n, 8, 1, false)?;
        let fails = report.count(Verdict::Fail);
        let checks = report.checks.iter().filter(|c| c.anchor != "plumbing").count();
        o.check(fails == 0 && checks > 0, format!("{series}({n}): {checks} relation records at 8 points, {fails} FAIL"));
    }
    let secs = start.elapsed().as_secs_f64();
    o.check(secs < 60.0, format!("wall clock {secs:.1}s (budget 60s)"));
    Ok(o)
}

fn criterion_2() -> Result<Outcome, FusionError> {
    let mut o = Outcome::new(2, "ranks of R(q^-2) and E, idempotency of E");
    for (series, n, kernel) in [(Series::So, 9u32, 44u64), (Series::Sp, 8, 27)] {
        let p = sample_admissible_point(&field(), series, n, 2)?;
        let fam = build_rep(series, n, &p)?;
        let records = idempotent_records(&fam)?;
        let get = |name: &str| records.iter().find(|r| r.name == name).expect("record present");
        let idem = get("idempotent E² = E");
        o.check(idem.verdict == Verdict::Pass, format!("{series}({n}): E² = E"));
        let e = get("rank of E");
        o.check(e.payload["rank"] == 37, format!("{series}({n}): rank E = {}", e.payload["rank"]));
        let r = get("rank of R(q^-2)");
        let ok = r.payload["rank"] == 37 && r.payload["kernel"] == kernel;
        o.check(ok, format!("{series}({n}): rank R(q^-2) = {} of {}, kernel {}", r.payload["rank"], n * n, r.payload["kernel"]));
    }
    Ok(o)
}

fn criterion_3() -> Result<Outcome, RunError> {
    let mut o = Outcome::new(3, "reduced words of the longest elements of S(3) and S(4)");
    let checks: FuseChecks = "matsumoto".parse().expect("check set");
    for (series, n) in [(Series::So, 9), (Series::Sp, 8)] {
        let opts = FuseOptions { checks, probes: 5, ..FuseOptions::default() };
        let report = run::fuse_check(&field(), series, n, 3, &opts)?;
        let (ok, line) = all_pass(&report, "reduced words of the longest element agree", 16);
        o.check(ok, format!("{series}({n}): {line} (1 pair for S(3), 15 for S(4))"));
    }
    Ok(o)
}

fn criterion_4() -> Result<Outcome, RunError> {
    let mut o = Outcome::new(4, "fused Yang-Baxter equation on W⊗W⊗W");
    let checks: FuseChecks = "ybe".parse().expect("check set");
    for (series, n) in [(Series::So, 9), (Series::Sp, 8)] {
        let start = Instant::now();
        for seed in [41, 42] {
            let opts = FuseOptions { checks, probes: 5, pairs: 3, ..FuseOptions::default() };
            let report = run::fuse_check(&field(), series, n, seed, &opts)?;
            let (ok, line) = all_pass(&report, "fused Yang-Baxter equation", 3);
            o.check(ok, format!("{series}({n}) seed {seed}: {line}, 5 probes each"));
        }
        let secs = start.elapsed().as_secs_f64();
        o.check(secs < 300.0, format!("{series}({n}): wall clock {secs:.1}s (budget 300s)"));
    }
    Ok(o)
}

fn criterion_5() -> Result<Outcome, RunError> {
    let mut o = Outcome::new(5, "fused unitarity S(u)S(1/u) = 1 with the printed normalization");
    let checks: FuseChecks = "unitarity".parse().expect("check set");
    for (series, n) in [(Series::So, 9), (Series::Sp, 8)] {
        let printed = FuseOptions { checks, probes: 5, pairs: 3, ..FuseOptions::default() };
        let report = run::fuse_check(&field(), series, n, 5, &printed)?;
        let (ok, line) = all_pass(&report, "fused unitarity S(w)S(1/w) = 1", 3);
        o.check(ok, format!("{series}({n}) printed 1/k: {line}"));
        let (ok, line) = all_pass(&report, "unnormalized product is not the identity", 3);
        o.check(ok, format!("{series}({n}) negative control: {line}"));
        let matches = report
            .find("fused unitarity S(w)S(1/w) = 1")
            .all(|r| r.payload["outcome"]["proportional_to_identity"] == true && r.payload["outcome"]["scalar_matches_prediction"] == true);
        o.note(format!(
            "{series}({n}) printed 1/k gives a scalar multiple of the identity equal to the closed form: {matches}"
        ));
        let unitary = FuseOptions { normalization: Normalization::Unitary, ..printed };
        let report = run::fuse_check(&field(), series, n, 5, &unitary)?;
        let (ok, line) = all_pass(&report, "fused unitarity S(w)S(1/w) = 1", 3);
        o.note(format!("{series}({n}) with 1/(k Q^-2 (q-q^-1)^8 [x+1][x+2][x+n/2-2]): {line}, {}", if ok { "identity" } else { "not identity" }));
    }
    Ok(o)
}

fn spectrum_report(series: Series, n: u32) -> Result<VerificationReport, RunError> {
    let opts = SpectrumOptions { points: POINTS, ..SpectrumOptions::default() };
    run::spectrum(&field(), series, n, 6, &opts)
}

fn criterion_6(reports: &[(Series, u32, VerificationReport)]) -> Outcome {
    let mut o = Outcome::new(6, "centralizer dimension 17, multiplicities {3,2,1,1,1,1}, perfect powers");
    for (series, n, report) in reports {
        for name in [
            "dimension and block multiplicities of the centralizer",
            "block dimensions account for W⊗W",
            "restricted polynomials are perfect powers and multiply to the full one",
            "central idempotents of the centralizer",
        ] {
            let (ok, line) = all_pass(report, name, POINTS);
            o.check(ok, format!("{series}({n}): {line}"));
        }
    }
    o
}

fn criterion_7(reports: &[(Series, u32, VerificationReport)]) -> Outcome {
    let mut o = Outcome::new(7, "block spectra against the table and the 2x2 and 3x3 matrices");
    for (series, n, report) in reports {
        for name in [
            "rank one eigenvalues against the table",
            "empty-partition block against the 2x2 matrix",
            "adjoint block against the conjugated 3x3 matrix",
        ] {
            let (ok, line) = all_pass(report, name, POINTS);
            o.check(ok, format!("{series}({n}): {line}"));
        }
        if let Some(r) = report.find("determinant of the empty-partition block").next() {
            o.note(format!("{series}({n}): computed determinant closed form {}", r.payload["closed_form"]));
        }
        if let Some(r) = report.find("product c12 c21 from the adjoint block").next() {
            o.note(format!(
                "{series}({n}): printed c12 c21 over computed equals {{n/2-1}}^2: {}",
                r.payload["ratio_is_{n/2-1}^2"]
            ));
        }
    }
    o
}

fn identity(lhs: Side, rhs: Side, n: u32, seed: u64) -> Result<IdentityVerdict, RunError> {
    Ok(identity_test(&lhs, &rhs, Series::So, n, 8, seed)?)
}

fn criterion_8() -> Result<Outcome, RunError> {
    let mut o = Outcome::new(8, "closed-form identities and the specialization (-1, 2, n/2-2)");
    let n = 9;
    let c11 = catalog_get("propC.c11")?;
    let c22 = catalog_get("propC.c22")?;
    let v = identity(Side::plain(c11), Side::plain(c22).inverted(), n, 81)?;
    o.check(v.passed(), "c11(u) = c22(1/u) at 8 points");
    for t in ["x", "x+n/2-1", "2x-n+3/2"] {
        let lhs = parse_expr(&format!("{{{t}}}[{t}]"))?;
        let rhs = parse_expr(&format!("[{}]", doubled(t)))?;
        let v = identity(Side::plain(&lhs), Side::plain(&rhs), n, 82)?;
        o.check(v.passed(), format!("{{t}}[t] = [2t] for t = {t}"));
    }
    let params = universal_params_for(Series::So, n)?;
    for (univ, own) in [
        ("universal.table.p1111", "table_so.p1111"),
        ("universal.table.p211", "table_so.p211"),
        ("universal.A.a11", "propA.a11"),
        ("universal.A.a22", "propA.a22"),
        ("universal.C.c11", "propC.c11"),
        ("universal.C.c22", "propC.c22"),
        ("universal.C.c21", "propC.c21"),
        ("universal.C.c33", "propC.c33"),
    ] {
        let v = identity(Side::with_params(catalog_get(univ)?, params), Side::plain(catalog_get(own)?), n, 83)?;
        let detail = match &v {
            IdentityVerdict::Pass { trials } => format!("{univ} = {own} at {trials} points"),
            IdentityVerdict::Fail { ratio_independent_of_u, .. } => {
                format!("{univ} = {own} fails; ratio independent of u: {ratio_independent_of_u}")
            }
        };
        o.check(v.passed(), detail);
    }
    Ok(o)
}

/// `2t` written out for the parser, e.g. `x+n/2-1` becomes `2x+n-2`.
fn doubled(t: &str) -> &'static str {
    match t {
        "x" => "2x",
        "x+n/2-1" => "2x+n-2",
        "2x-n+3/2" => "4x-2n+3",
        other => panic!("no doubled form for {other}"),
    }
}

fn criterion_9(so: &VerificationReport) -> Outcome {
    let mut o = Outcome::new(9, "discrepancies recorded with arbitration, blank b12 derived");
    for name in [
        "universal.C.c12 specializes to propC.c12",
        "universal.table.p22 specializes to table_so.p22",
        "universal.table.p2 specializes to table_so.p2",
    ] {
        let records: Vec<_> = so.find(name).collect();
        let ok = records.len() == POINTS
            && records.iter().all(|r| r.verdict == Verdict::Discrepancy && r.payload["arbitration"]["agrees_with"].is_string());
        let agrees = records.first().map(|r| r.payload["arbitration"]["agrees_with"].to_string()).unwrap_or_default();
        o.check(ok, format!("so(9): DISCREPANCY for {name} at {POINTS} points, computed value agrees with {agrees}"));
    }
    let b12: Vec<_> = so.find("blank entry b12 = b21 of the adjoint matrix").collect();
    let ok = b12.len() == POINTS
        && b12.iter().all(|r| r.verdict == Verdict::Derived && r.payload["b12_b21"].is_string() && r.payload["adjoint_cubic"].is_array());
    o.check(ok, format!("so(9): DERIVED adjoint cubic and b12 b21 at {} points", b12.len()));
    o
}

fn criterion_10() -> Result<Outcome, RunError> {
    let mut o = Outcome::new(10, "identical flags and seed give byte-identical reports");
    let f = field();
    let a = run::verify_rep(&f, Series::So, 9, 2, 10, false)?.to_json();
    let b = run::verify_rep(&f, Series::So, 9, 2, 10, false)?.to_json();
    o.check(a == b, "verify-rep so(9)");
    let opts = FuseOptions { probes: 2, pairs: 1, ..FuseOptions::default() };
    let a = run::fuse_check(&f, Series::So, 5, 10, &opts)?.to_json();
    let b = run::fuse_check(&f, Series::So, 5, 10, &opts)?.to_json();
    o.check(a == b, "fuse-check so(5)");
    let opts = SpectrumOptions { points: 2, ..SpectrumOptions::default() };
    let a = run::spectrum(&f, Series::So, 9, 10, &opts)?.to_json();
    let b = run::spectrum(&f, Series::So, 9, 10, &opts)?.to_json();
    o.check(a == b, "spectrum so(9)");
    Ok(o)
}

fn main() -> ExitCode {
    let strict = std::env::var("RMX_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let mut outcomes = vec![
        criterion_1().unwrap_or_else(|e| Outcome::error(1, "relation suite", e)),
        criterion_2().unwrap_or_else(|e| Outcome::error(2, "ranks", e)),
        criterion_3().unwrap_or_else(|e| Outcome::error(3, "reduced words", e)),
        criterion_4().unwrap_or_else(|e| Outcome::error(4, "fused Yang-Baxter equation", e)),
        criterion_5().unwrap_or_else(|e| Outcome::error(5, "fused unitarity", e)),
    ];
    let reports: Result<Vec<_>, RunError> = [(Series::So, 9u32), (Series::Sp, 8)]
        .into_iter()
        .map(|(s, n)| spectrum_report(s, n).map(|r| (s, n, r)))
        .collect();
    match reports {
        Ok(reports) => {
            outcomes.push(criterion_6(&reports));
            outcomes.push(criterion_7(&reports));
            outcomes.push(criterion_8().unwrap_or_else(|e| Outcome::error(8, "closed-form identities", e)));
            outcomes.push(criterion_9(&reports[0].2));
        }
        Err(e) => {
            outcomes.push(Outcome::error(6, "centralizer structure", &e));
            outcomes.push(Outcome::error(7, "spectral match", &e));
            outcomes.push(criterion_8().unwrap_or_else(|e| Outcome::error(8, "closed-form identities", e)));
            outcomes.push(Outcome::error(9, "discrepancy documentation", &e));
        }
    }
    outcomes.push(criterion_10().unwrap_or_else(|e| Outcome::error(10, "determinism", e)));

    let mut unexpected = Vec::new();
    for o in &outcomes {
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        let known = KNOWN_RED.contains(&o.id);
        let tag = match (o.pass, known) {
            (false, true) => " (known: printed formula disagrees with the computation)",
            (true, true) => " (listed as known red, now passes)",
            _ => "",
        };
        println!("criterion {:>2}: {verdict}  {}{tag}", o.id, o.title);
        for d in &o.details {
            println!("    {d}");
        }
        if o.pass == known {
            unexpected.push(o.id);
        }
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    println!("{} of {} criteria pass", outcomes.len() - failed, outcomes.len());
    if !unexpected.is_empty() {
        println!("outcome differs from the known-red list for criteria {unexpected:?}");
        return ExitCode::FAILURE;
    }
    if strict && failed > 0 {
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
