//! The named catalog of closed-form expressions.
//!
//! Each entry keeps the printed source text next to its parsed tree. Entries under
//! `derived.` are not printed anywhere; they are closed forms recovered by this
//! crate's own computations and are tested like every other entry.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use super::expr::{BracketExpr, UniversalParams};
use super::parse::parse_expr;
use super::FormulaError;
use crate::arith::{EvalPoint, Field, Series};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntryValue {
    Scalar(BracketExpr),
    IntMatrix(Vec<Vec<i64>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub anchor: &'static str,
    pub source: &'static str,
    pub value: EntryValue,
}

const SCALARS: &[(&str, &str, &str)] = &[
    ("unitarity_scalar", "unitarity display", "Q[n/2+x-1][n/2-x-1][1+x][1-x]"),
    ("loop_delta", "quadratic relation for u", "1+[n-1]"),
    ("k_norm", "fused normalization constant", "[x][x-1][x+n/2][x+n/2-1]^2"),
    ("table_so.p1111", "rank one eigenvalue table, row 1^4", "[x-1][x-2][n/2+x-2]"),
    ("table_so.p211", "rank one eigenvalue table, row 2,1,1", "-[x-1][x+2][n/2+x-2]"),
    ("table_so.p22", "rank one eigenvalue table, row 2,2", "[x+1][x+2][n/2+x-2]"),
    ("table_so.p2", "rank one eigenvalue table, row 2", "[x-1][x+2][-n/2+x+2]"),
    (
        "propA.a11",
        "empty-partition 2x2 matrix",
        "{2x}{n/2-1}[2][n/2-2]\\frac{[n+x-2]}{[n+x/2-1]}+[x+2][x-1][x+n/2-2]",
    ),
    (
        "propA.a22",
        "empty-partition 2x2 matrix",
        "{-2x}{n/2-1}[2][n/2-2]\\frac{[n-x-2]}{[n-x/2-1]}-[x-2][x+1][x-n/2+2]",
    ),
    ("propA.a12", "empty-partition 2x2 matrix", "[2x][2]\\frac{[n/2-2]^2}{[x+n/2-1]}"),
    (
        "propA.a21",
        "empty-partition 2x2 matrix",
        "\\frac{[2x][n/2][n-1]{n/2-2}}{{n/2-1}^2[n/2+x-1]}",
    ),
    ("matB.b11", "adjoint 3x3 matrix", "[2][n/2-2]\\frac{{n/2+x-1}}{{n/2-1}}"),
    ("matB.b13", "adjoint 3x3 matrix", "{n/2}{n/2-3}[n/2-1][x]"),
    ("matB.b31", "adjoint 3x3 matrix", "[2]^2[x][n/2-2]"),
    (
        "propC.c11",
        "conjugated adjoint matrix",
        "[x+2][x-1][x+n/2-2]+2[2][n/2-2]\\frac{{x+n/2-1}}{{n/2-1}}",
    ),
    (
        "propC.c22",
        "conjugated adjoint matrix",
        "[-x+2][-x-1][-x+n/2-2]+2[2][n/2-2]\\frac{{-x+n/2-1}}{{n/2-1}}",
    ),
    ("propC.c21", "conjugated adjoint matrix", "[2]^2[x][n/2-2]"),
    ("propC.c12", "conjugated adjoint matrix", "2[x][n/2-1]{n/2}{n/2-3}"),
    ("propC.c33", "conjugated adjoint matrix", "-[x+2][x-1][x+n/2-2]"),
    ("universal.table.p1111", "universal rank one table, row 1^4", "[x+α][x-β][x+γ]"),
    ("universal.table.p211", "universal rank one table, row 2,1,1", "-[x+α][x+β][x+γ]"),
    ("universal.table.p22", "universal rank one table, row 2,2", "[x-α][x-β][x+γ]"),
    ("universal.table.p2", "universal rank one table, row 2", "[x+α][x-β][x-γ]"),
    (
        "universal.A.a11",
        "universal empty-partition entries",
        "-{2x}{α+β+γ}[α][β][γ]\\frac{[n+x-2]}{[n+x/2-1]}+[x+α][x+β][x+γ]",
    ),
    (
        "universal.A.a22",
        "universal empty-partition entries",
        "{2x}{α+β+γ}[α][β][γ]\\frac{[n-x-2]}{[n-x/2-1]}+[-x+α][-x+β][-x+γ]",
    ),
    (
        "universal.C.c11",
        "universal adjoint matrix",
        "[x+α][x+β][x+γ]-2[α][β][γ]\\frac{{x+α+β+γ}}{{α+β+γ}}",
    ),
    (
        "universal.C.c22",
        "universal adjoint matrix",
        "[-x+α][-x+β][-x+γ]-2[α][β][γ]\\frac{{-x+α+β+γ}}{{α+β+γ}}",
    ),
    ("universal.C.c21", "universal adjoint matrix", "[2]^2[x][α+β+γ-1]"),
    ("universal.C.c12", "universal adjoint matrix", "2[x][α+β+γ]{α+β}{α+γ}{β+γ}"),
    ("universal.C.c33", "universal adjoint matrix", "-[x+α][x+β][x+γ]"),
    (
        "derived.unitarity_scalar",
        "derived",
        "Q^{-1}(q-q^{-1})^4[n/2+x-1][n/2-x-1][1+x][1-x]",
    ),
    ("derived.spectral_scale", "derived", "Q^{-2}(q-q^{-1})^8"),
    (
        "derived.fused_unitarity_scalar",
        "derived",
        "Q^{-4}(q-q^{-1})^{16}[x+1][x+2][n/2+x-2][-x+1][-x+2][n/2-x-2]",
    ),
    (
        "derived.trivial_det",
        "derived",
        "\\frac{[x+2][x-2][x+1][x-1][x+n/2-2][x-n/2+2][x-n/2+1]}{[x+n/2-1]}",
    ),
    (
        "derived.c12c21",
        "derived",
        "\\frac{2[x][n/2-1]{n/2}{n/2-3}[2]^2[x][n/2-2]}{{n/2-1}^2}",
    ),
];

const MATRICES: &[(&str, &str, &[&[i64]])] =
    &[("matP", "conjugating matrix for the adjoint block", &[&[1, 0, 1], &[1, 0, -1], &[0, 1, 0]])];

#[derive(Debug)]
pub struct FormulaCatalog {
    entries: BTreeMap<&'static str, CatalogEntry>,
}

impl FormulaCatalog {
    fn build() -> Result<Self, FormulaError> {
        let mut entries = BTreeMap::new();
        for &(name, anchor, source) in SCALARS {
            let value = EntryValue::Scalar(parse_expr(source)?);
            entries.insert(name, CatalogEntry { name, anchor, source, value });
        }
        for &(name, anchor, rows) in MATRICES {
            let value = EntryValue::IntMatrix(rows.iter().map(|r| r.to_vec()).collect());
            entries.insert(name, CatalogEntry { name, anchor, source: "", value });
        }
        Ok(FormulaCatalog { entries })
    }

    /// The shared, immutable catalog.
    pub fn standard() -> &'static FormulaCatalog {
        static CATALOG: OnceLock<FormulaCatalog> = OnceLock::new();
        CATALOG.get_or_init(|| FormulaCatalog::build().expect("catalog sources parse"))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn entry(&self, name: &str) -> Result<&CatalogEntry, FormulaError> {
        self.entries.get(name).ok_or_else(|| FormulaError::UnknownName(name.to_string()))
    }

    pub fn get(&self, name: &str) -> Result<&BracketExpr, FormulaError> {
        match &self.entry(name)?.value {
            EntryValue::Scalar(e) => Ok(e),
            EntryValue::IntMatrix(_) => Err(FormulaError::NotScalar(name.to_string())),
        }
    }

    pub fn matrix(&self, name: &str) -> Result<&[Vec<i64>], FormulaError> {
        match &self.entry(name)?.value {
            EntryValue::IntMatrix(m) => Ok(m),
            EntryValue::Scalar(_) => Err(FormulaError::NotMatrix(name.to_string())),
        }
    }
}

pub fn catalog_get(name: &str) -> Result<&'static BracketExpr, FormulaError> {
    FormulaCatalog::standard().get(name)
}

pub fn eval_formula<F: Field>(
    e: &BracketExpr,
    p: &EvalPoint<F>,
    params: Option<&UniversalParams>,
) -> Result<F::Elem, FormulaError> {
    if e.is_universal() && params.is_none() {
        return Err(FormulaError::MissingParams);
    }
    e.eval(p, params)
}

/// Evaluates a catalog entry by name.
pub fn eval_named<F: Field>(
    name: &str,
    p: &EvalPoint<F>,
    params: Option<&UniversalParams>,
) -> Result<F::Elem, FormulaError> {
    eval_formula(catalog_get(name)?, p, params)
}

/// `(α, β, γ) = (-1, 2, n/2 - 2)` for so(n).
pub fn universal_params_for(series: Series, n: u32) -> Result<UniversalParams, FormulaError> {
    match series {
        Series::So => Ok(UniversalParams { alpha2: -2, beta2: 4, gamma2: n as i32 - 4 }),
        Series::Sp => Err(FormulaError::Unsupported("universal parameters for sp(n)".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{sample_admissible_point, PrimeField};

    const REQUIRED: &[&str] = &[
        "unitarity_scalar",
        "loop_delta",
        "k_norm",
        "table_so.p1111",
        "table_so.p211",
        "table_so.p22",
        "table_so.p2",
        "propA.a11",
        "propA.a12",
        "propA.a21",
        "propA.a22",
        "matB.b11",
        "matB.b13",
        "matB.b31",
        "matP",
        "propC.c11",
        "propC.c12",
        "propC.c21",
        "propC.c22",
        "propC.c33",
        "universal.table.p1111",
        "universal.table.p211",
        "universal.table.p22",
        "universal.table.p2",
        "universal.A.a11",
        "universal.A.a22",
        "universal.C.c11",
        "universal.C.c12",
        "universal.C.c21",
        "universal.C.c22",
        "universal.C.c33",
    ];

    #[test]
    fn every_required_name_resolves() {
        let cat = FormulaCatalog::standard();
        for name in REQUIRED {
            assert!(cat.entry(name).is_ok(), "{name}");
        }
        assert!(cat.get("matB.b12").is_err());
        assert!(matches!(cat.get("nosuch"), Err(FormulaError::UnknownName(_))));
        assert_eq!(cat.matrix("matP").unwrap()[1], vec![1, 0, -1]);
    }

    #[test]
    fn printed_forms_round_trip() {
        assert_eq!(catalog_get("propA.a12").unwrap().to_string(), "[2x][2]\\frac{[n/2-2]^2}{[x+n/2-1]}");
        assert_eq!(catalog_get("propC.c33").unwrap().to_string(), "-[x+2][x-1][x+n/2-2]");
        assert_eq!(catalog_get("table_so.p22").unwrap().to_string(), "[x+1][x+2][x+n/2-2]");
    }

    #[test]
    fn every_entry_evaluates_at_random_points() {
        let f = PrimeField::default();
        let cat = FormulaCatalog::standard();
        for (series, n) in [(Series::So, 9), (Series::So, 11), (Series::Sp, 8), (Series::Sp, 10)] {
            for seed in 0..100 {
                let p = sample_admissible_point(&f, series, n, seed).unwrap();
                let params = universal_params_for(series, n).ok();
                for name in cat.names() {
                    let Ok(e) = cat.get(name) else { continue };
                    if e.is_universal() && params.is_none() {
                        continue;
                    }
                    e.eval(&p, params.as_ref()).unwrap_or_else(|err| panic!("{name}: {err}"));
                }
            }
        }
    }

    #[test]
    fn k_norm_matches_arith_layer() {
        let f = PrimeField::default();
        let p = sample_admissible_point(&f, Series::So, 9, 5).unwrap();
        assert_eq!(eval_named("k_norm", &p, None).unwrap(), crate::arith::k_norm(&p).unwrap());
    }

    #[test]
    fn universal_needs_params() {
        let f = PrimeField::default();
        let p = sample_admissible_point(&f, Series::So, 9, 5).unwrap();
        assert_eq!(eval_named("universal.C.c33", &p, None), Err(FormulaError::MissingParams));
        assert!(universal_params_for(Series::Sp, 8).is_err());
    }
}
