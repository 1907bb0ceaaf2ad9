use rmx_core::arith::{sample_admissible_point, PrimeField, RationalField, Series};
use rmx_core::fusion::Normalization;
use rmx_core::rep::build_rep;
use rmx_core::report::Verdict;
use rmx_core::run::{self, FuseOptions, SpectrumOptions};
use rmx_core::spectral::{CompareSet, SpectralAnalysis};

#[test]
fn relations_hold_over_the_rationals() {
    let report = run::verify_rep(&RationalField, Series::So, 7, 2, 3, false).unwrap();
    assert!(!report.has_failures(), "{}", report.to_json());
    let report = run::verify_rep(&RationalField, Series::Sp, 6, 2, 3, false).unwrap();
    assert!(!report.has_failures(), "{}", report.to_json());
}

#[test]
fn relations_hold_for_acceptance_ranks() {
    let f = PrimeField::default();
    for (series, n) in [(Series::So, 9), (Series::So, 11), (Series::Sp, 8)] {
        let report = run::verify_rep(&f, series, n, 2, 11, false).unwrap();
        assert!(!report.has_failures(), "{series}({n})");
        assert!(report.count(Verdict::Pass) > 0);
    }
}

#[test]
fn symplectic_fused_checks() {
    let f = PrimeField::default();
    let opts = FuseOptions { probes: 2, pairs: 1, normalization: Normalization::Unitary, ..FuseOptions::default() };
    let report = run::fuse_check(&f, Series::Sp, 8, 5, &opts).unwrap();
    assert!(!report.has_failures(), "{}", report.to_json());
    assert_eq!(report.find("fused Yang-Baxter equation").count(), 1);
    assert_eq!(report.find("reduced words of the longest element agree").count(), 16);
}

#[test]
fn negative_control_fails_every_corrupted_check() {
    let f = PrimeField::default();
    let opts = FuseOptions { probes: 2, pairs: 1, negative_control: true, ..FuseOptions::default() };
    let report = run::fuse_check(&f, Series::So, 5, 5, &opts).unwrap();
    for name in [
        "fused Yang-Baxter equation",
        "fused unitarity S(w)S(1/w) = 1",
        "idempotent E² = E",
        "reduced words of the longest element agree",
    ] {
        assert!(report.find(name).all(|r| r.verdict == Verdict::Fail), "{name}");
    }
}

#[test]
fn so9_fused_space_structure() {
    let f = PrimeField::default();
    let p = sample_admissible_point(&f, Series::So, 9, 5).unwrap();
    let fam = build_rep(Series::So, 9, &p).unwrap();
    let an = SpectralAnalysis::new(&fam, 5).unwrap();
    let space = an.space();
    assert_eq!(space.dim(), 37 * 37);
    assert_eq!(space.blocks().len(), 257);
    assert_eq!(space.zero_block().rank(), 57);
    assert_eq!(space.zero_block().ambient_dim(), 217);
    let alg = an.algebra();
    assert_eq!(alg.dim(), 17);
    assert_eq!(alg.center_dim(), 6);
    let mut blocks: Vec<(usize, usize)> = alg.blocks().iter().map(|b| (b.m, b.d)).collect();
    blocks.sort_unstable();
    assert_eq!(blocks, vec![(1, 44), (1, 126), (1, 495), (1, 594), (2, 1), (3, 36)]);
}

#[test]
fn sp8_fused_space_structure() {
    let f = PrimeField::default();
    let p = sample_admissible_point(&f, Series::Sp, 8, 5).unwrap();
    let fam = build_rep(Series::Sp, 8, &p).unwrap();
    let an = SpectralAnalysis::new(&fam, 5).unwrap();
    assert_eq!(an.space().blocks().len(), 225);
    assert_eq!(an.space().zero_block().ambient_dim(), 168);
    let mut blocks: Vec<(usize, usize)> = an.algebra().blocks().iter().map(|b| (b.m, b.d)).collect();
    blocks.sort_unstable();
    assert_eq!(blocks, vec![(1, 27), (1, 308), (1, 330), (1, 594), (2, 1), (3, 36)]);
}

#[test]
fn restricted_comparison_only_reports_what_was_asked() {
    let f = PrimeField::default();
    let opts = SpectrumOptions { points: 1, compare: "table".parse::<CompareSet>().unwrap(), ..SpectrumOptions::default() };
    let report = run::spectrum(&f, Series::So, 9, 4, &opts).unwrap();
    assert!(!report.has_failures(), "{}", report.to_json());
    assert_eq!(report.find("rank one eigenvalues against the table").count(), 1);
    assert_eq!(report.find("empty-partition block against the 2x2 matrix").count(), 0);
}

#[test]
fn spectral_discrepancies_are_recorded_with_arbitration() {
    let f = PrimeField::default();
    let opts = SpectrumOptions { points: 1, ..SpectrumOptions::default() };
    let report = run::spectrum(&f, Series::So, 9, 4, &opts).unwrap();
    let disc: Vec<&str> = report.checks.iter().filter(|c| c.verdict == Verdict::Discrepancy).map(|c| c.name.as_str()).collect();
    assert!(disc.contains(&"universal.C.c12 specializes to propC.c12"));
    assert!(disc.contains(&"universal.table.p22 specializes to table_so.p22"));
    assert!(disc.contains(&"universal.table.p2 specializes to table_so.p2"));
    for c in report.checks.iter().filter(|c| c.verdict == Verdict::Discrepancy) {
        assert!(c.payload.get("arbitration").is_some(), "{}", c.name);
    }
}
