use proptest::prelude::*;

use rmx_core::arith::{brace_eval, bracket_eval, BracketTriple, EvalPoint, Field, PrimeField, RationalField, Series};
use rmx_core::formulas::{eval_named, EntryValue, FormulaCatalog, FormulaError};
use num_rational::BigRational;

fn nonunit_rational() -> impl Strategy<Value = BigRational> {
    (1i64..=12, 1i64..=12, any::<bool>())
        .prop_filter("not ±1", |(a, b, _)| a != b)
        .prop_map(|(a, b, neg)| BigRational::new((if neg { -a } else { a }).into(), b.into()))
}

fn triple() -> impl Strategy<Value = BracketTriple> {
    (-4i32..=4, -4i32..=4, -8i32..=8).prop_map(|(a, b, c)| BracketTriple::halves(a, b, c))
}

fn prime_point(series: Series, n: u32) -> impl Strategy<Value = EvalPoint<PrimeField>> {
    (2u64..1 << 40, 2u64..1 << 40).prop_filter_map("degenerate point", move |(qh, uh)| {
        EvalPoint::new(PrimeField::default(), series, n, qh, uh).ok()
    })
}

proptest! {
    #[test]
    fn bracket_is_odd_and_brace_is_even(p in prime_point(Series::So, 9), t in triple()) {
        let f = p.field();
        prop_assert_eq!(bracket_eval(t.neg(), &p).unwrap(), f.neg(&bracket_eval(t, &p).unwrap()));
        prop_assert_eq!(brace_eval(t.neg(), &p), brace_eval(t, &p));
    }

    #[test]
    fn brace_times_bracket_doubles(p in prime_point(Series::Sp, 8), t in triple()) {
        let f = p.field();
        let lhs = f.mul(&brace_eval(t, &p), &bracket_eval(t, &p).unwrap());
        prop_assert_eq!(lhs, bracket_eval(t.double(), &p).unwrap());
    }

    #[test]
    fn rational_and_prime_backends_agree(qh in nonunit_rational(), uh in nonunit_rational()) {
        let p = PrimeField::default();
        let Ok(rat) = EvalPoint::new(RationalField, Series::So, 9, qh.clone(), uh.clone()) else {
            return Ok(());
        };
        let red = EvalPoint::new(p, Series::So, 9, p.reduce_rational(&qh).unwrap(), p.reduce_rational(&uh).unwrap()).unwrap();
        let catalog = FormulaCatalog::standard();
        for name in catalog.names() {
            let entry = catalog.entry(name).unwrap();
            let EntryValue::Scalar(expr) = &entry.value else { continue };
            if expr.is_universal() {
                continue;
            }
            match eval_named(name, &rat, None) {
                Ok(v) => prop_assert_eq!(p.reduce_rational(&v).unwrap(), eval_named(name, &red, None).unwrap(), "{}", name),
                Err(FormulaError::ZeroDenominator(_)) => {}
                Err(e) => return Err(TestCaseError::fail(format!("{name}: {e}"))),
            }
        }
    }
}
