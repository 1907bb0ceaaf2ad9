//! Values frozen from an independent exact evaluation with Python `fractions`.

use rmx_core::arith::{parse_rational, EvalPoint, Field, PrimeField, RationalField, Series};
use rmx_core::formulas::eval_named;
use rmx_core::rep::build_rep;
use rmx_core::arith::sample_admissible_point;

fn so9_point(qh: &str, uh: &str) -> EvalPoint<RationalField> {
    EvalPoint::new(RationalField, Series::So, 9, parse_rational(qh).unwrap(), parse_rational(uh).unwrap()).unwrap()
}

fn value(name: &str, p: &EvalPoint<RationalField>) -> String {
    RationalField.render(&eval_named(name, p, None).unwrap())
}

#[test]
fn empty_block_off_diagonal_entry() {
    assert_eq!(value("propA.a12", &so9_point("3/2", "5")), "2616895228816/38861410133");
}

#[test]
fn adjoint_simple_eigenvalue_at_unit_argument() {
    assert_eq!(value("propC.c33", &so9_point("3/2", "1")), "1125685/101088");
}

#[test]
fn normalization_constant() {
    assert_eq!(
        value("k_norm", &so9_point("3/2", "5")),
        "1650961996517069763933980203124243/656761430812500000000000"
    );
}

#[test]
fn eigenspace_dimensions() {
    let f = PrimeField::default();
    for (series, n, dims) in [(Series::So, 9, [44, 36, 1]), (Series::Sp, 8, [27, 36, 1])] {
        let p = sample_admissible_point(&f, series, n, 1).unwrap();
        let fam = build_rep(series, n, &p).unwrap();
        assert_eq!(fam.eigenspace_dims(), dims, "{series}({n})");
    }
}
