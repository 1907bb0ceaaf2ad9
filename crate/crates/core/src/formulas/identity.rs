//! Randomized identity testing between bracket expressions.
//!
//! Two expressions are compared at independently sampled admissible points of
//! the default prime field. A mismatch yields a witness together with the
//! ratio of the two sides, and records whether that ratio stays fixed when only
//! the spectral variable moves (the signature of a misprinted constant).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::expr::{BracketExpr, UniversalParams};
use super::FormulaError;
use crate::arith::{resample_spectral, sample_admissible_point, ArithError, EvalPoint, Field, PrimeField, Series};

/// Attempts allowed per requested trial before giving up on degenerate draws.
const ATTEMPTS_PER_TRIAL: usize = 20;

/// Extra spectral samples used to decide whether a ratio depends on `u`.
const RATIO_PROBES: usize = 3;

/// One side of an identity: an expression, optional universal parameters, and
/// whether it is evaluated at `u^{-1}`.
#[derive(Debug, Clone)]
pub struct Side<'a> {
    pub expr: &'a BracketExpr,
    pub params: Option<UniversalParams>,
    pub invert_u: bool,
}

impl<'a> Side<'a> {
    pub fn plain(expr: &'a BracketExpr) -> Self {
        Side { expr, params: None, invert_u: false }
    }

    pub fn with_params(expr: &'a BracketExpr, params: UniversalParams) -> Self {
        Side { expr, params: Some(params), invert_u: false }
    }

    pub fn inverted(mut self) -> Self {
        self.invert_u = !self.invert_u;
        self
    }

    pub fn eval<F: Field>(&self, p: &EvalPoint<F>) -> Result<F::Elem, FormulaError> {
        if self.expr.is_universal() && self.params.is_none() {
            return Err(FormulaError::MissingParams);
        }
        if self.invert_u {
            self.expr.eval(&p.inverted_u(), self.params.as_ref())
        } else {
            self.expr.eval(p, self.params.as_ref())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub qh: String,
    pub uh: String,
    pub lhs: String,
    pub rhs: String,
    pub ratio: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum IdentityVerdict {
    Pass { trials: usize },
    Fail { witness: Witness, ratio_independent_of_u: bool },
}

impl IdentityVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, IdentityVerdict::Pass { .. })
    }
}

fn is_degenerate(e: &FormulaError) -> bool {
    matches!(
        e,
        FormulaError::ZeroDenominator(_)
            | FormulaError::Arith(ArithError::Degenerate(_))
            | FormulaError::Arith(ArithError::DivisionByZero)
    )
}

fn mix(seed: u64, k: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

/// Tests `lhs = rhs` at `trials` admissible points.
pub fn identity_test(
    lhs: &Side,
    rhs: &Side,
    series: Series,
    n: u32,
    trials: usize,
    seed: u64,
) -> Result<IdentityVerdict, FormulaError> {
    identity_test_scaled(lhs, rhs, None, series, n, trials, seed)
}

/// Tests `lhs = scale · rhs`, where `scale` is evaluated at the same point.
pub fn identity_test_scaled(
    lhs: &Side,
    rhs: &Side,
    scale: Option<&BracketExpr>,
    series: Series,
    n: u32,
    trials: usize,
    seed: u64,
) -> Result<IdentityVerdict, FormulaError> {
    if trials == 0 {
        return Err(FormulaError::Unsupported("identity test with zero trials".into()));
    }
    let field = PrimeField::default();
    let eval_pair = |p: &EvalPoint<PrimeField>| -> Result<(u64, u64), FormulaError> {
        let l = lhs.eval(p)?;
        let mut r = rhs.eval(p)?;
        if let Some(s) = scale {
            r = field.mul(&r, &s.eval(p, None)?);
        }
        Ok((l, r))
    };
    let mut done = 0;
    let mut attempt = 0u64;
    while done < trials {
        if attempt as usize >= trials * ATTEMPTS_PER_TRIAL {
            return Err(FormulaError::Arith(ArithError::Exhausted(attempt as usize)));
        }
        let p = sample_admissible_point(&field, series, n, mix(seed, attempt))?;
        attempt += 1;
        let (l, r) = match eval_pair(&p) {
            Ok(v) => v,
            Err(e) if is_degenerate(&e) => continue,
            Err(e) => return Err(e),
        };
        done += 1;
        if l == r {
            continue;
        }
        let ratio = field.div(&l, &r).ok();
        let mut independent = ratio.is_some();
        if let Some(ratio) = ratio {
            let mut rng = ChaCha8Rng::seed_from_u64(mix(!seed, attempt));
            for _ in 0..RATIO_PROBES {
                let Ok(other) = resample_spectral(&p, &mut rng) else {
                    continue;
                };
                if let Ok((l2, r2)) = eval_pair(&other) {
                    if field.div(&l2, &r2).ok() != Some(ratio) {
                        independent = false;
                    }
                }
            }
        }
        let witness = Witness {
            qh: field.render(p.qh()),
            uh: field.render(p.uh()),
            lhs: field.render(&l),
            rhs: field.render(&r),
            ratio: ratio.map(|v| field.render(&v)),
        };
        return Ok(IdentityVerdict::Fail { witness, ratio_independent_of_u: independent });
    }
    Ok(IdentityVerdict::Pass { trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{catalog_get, parse_expr, universal_params_for};

    #[test]
    fn c11_is_c22_at_inverse_argument() {
        let c11 = catalog_get("propC.c11").unwrap();
        let c22 = catalog_get("propC.c22").unwrap();
        let v = identity_test(&Side::plain(c11), &Side::plain(c22).inverted(), Series::So, 9, 8, 1).unwrap();
        assert!(v.passed(), "{v:?}");
    }

    #[test]
    fn brace_times_bracket_is_doubled_bracket() {
        let lhs = parse_expr("{n/2+x-3}[n/2+x-3]").unwrap();
        let rhs = parse_expr("[n+2x-6]").unwrap();
        let v = identity_test(&Side::plain(&lhs), &Side::plain(&rhs), Series::So, 11, 8, 2).unwrap();
        assert!(v.passed());
    }

    #[test]
    fn universal_c12_carries_extra_factor_two() {
        let params = universal_params_for(Series::So, 9).unwrap();
        let uni = catalog_get("universal.C.c12").unwrap();
        let c12 = catalog_get("propC.c12").unwrap();
        let v = identity_test(&Side::with_params(uni, params), &Side::plain(c12), Series::So, 9, 4, 3).unwrap();
        match v {
            IdentityVerdict::Fail { ratio_independent_of_u, .. } => assert!(ratio_independent_of_u),
            other => panic!("expected a mismatch, got {other:?}"),
        }
        let two = parse_expr("[2]").unwrap();
        let scaled = identity_test_scaled(
            &Side::with_params(uni, params),
            &Side::plain(c12),
            Some(&two),
            Series::So,
            9,
            8,
            4,
        )
        .unwrap();
        assert!(scaled.passed());
    }

    #[test]
    fn u_dependent_mismatch_is_flagged() {
        let a = parse_expr("[x+1]").unwrap();
        let b = parse_expr("[x+2]").unwrap();
        match identity_test(&Side::plain(&a), &Side::plain(&b), Series::So, 9, 2, 0).unwrap() {
            IdentityVerdict::Fail { ratio_independent_of_u, .. } => assert!(!ratio_independent_of_u),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_trials_rejected() {
        let a = parse_expr("[x]").unwrap();
        assert!(identity_test(&Side::plain(&a), &Side::plain(&a), Series::So, 9, 0, 0).is_err());
    }
}
