//! Evaluation points for the bracket notation `[an+bx+c]` and `{an+bx+c}`.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::field::{Backend, Field};
use super::ArithError;

/// Maximum number of draws before [`sample_admissible_point`] gives up.
pub const MAX_SAMPLE_ATTEMPTS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Series {
    So,
    Sp,
}

impl Series {
    /// Exponent `e` with `Q = q^(e n)`. Orthogonal series use `Q = q^n`; the
    /// symplectic value is the specialization pinned by the relation suite.
    pub fn q_exponent_sign(self) -> i64 {
        match self {
            Series::So => 1,
            Series::Sp => -1,
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Series::So => "so",
            Series::Sp => "sp",
        })
    }
}

impl FromStr for Series {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "so" => Ok(Series::So),
            "sp" => Ok(Series::Sp),
            other => Err(ArithError::Parse(other.to_string())),
        }
    }
}

/// Exponents `(a, b, c)` of `Q^a u^b q^c`, each stored in units of 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BracketTriple {
    pub a2: i32,
    pub b2: i32,
    pub c2: i32,
}

impl BracketTriple {
    pub const fn halves(a2: i32, b2: i32, c2: i32) -> Self {
        BracketTriple { a2, b2, c2 }
    }

    pub const fn ints(a: i32, b: i32, c: i32) -> Self {
        BracketTriple { a2: 2 * a, b2: 2 * b, c2: 2 * c }
    }

    pub fn neg(self) -> Self {
        BracketTriple { a2: -self.a2, b2: -self.b2, c2: -self.c2 }
    }

    pub fn double(self) -> Self {
        BracketTriple { a2: 2 * self.a2, b2: 2 * self.b2, c2: 2 * self.c2 }
    }
}

impl fmt::Display for BracketTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (coef, sym) in [(self.a2, "n"), (self.b2, "x")] {
            if coef == 0 {
                continue;
            }
            push_term(&mut out, coef, sym);
        }
        if self.c2 != 0 || out.is_empty() {
            push_term(&mut out, self.c2, "");
        }
        f.write_str(&out)
    }
}

fn push_term(out: &mut String, coef2: i32, sym: &str) {
    let neg = coef2 < 0;
    let mag = coef2.unsigned_abs();
    if neg {
        out.push('-');
    } else if !out.is_empty() {
        out.push('+');
    }
    let (whole, half) = (mag / 2, mag % 2 == 1);
    match (sym.is_empty(), half) {
        (true, false) => out.push_str(&whole.to_string()),
        (true, true) => out.push_str(&format!("{mag}/2")),
        (false, false) if whole == 1 => out.push_str(sym),
        (false, false) => out.push_str(&format!("{whole}{sym}")),
        (false, true) if mag == 1 => out.push_str(&format!("{sym}/2")),
        (false, true) => out.push_str(&format!("{mag}{sym}/2")),
    }
}

/// A concrete assignment of `q^{1/2}`, `u^{1/2}` and `Q^{1/2}`.
///
/// The bracket variable `x` is tied to the point through `u = q^x`. The base
/// R-matrix is evaluated at the argument `u^2` (see [`EvalPoint::r_argument`]).
#[derive(Debug, Clone, PartialEq)]
pub struct EvalPoint<F: Field> {
    field: F,
    series: Series,
    n: u32,
    qh: F::Elem,
    uh: F::Elem,
    big_qh: F::Elem,
    qh_inv: F::Elem,
    uh_inv: F::Elem,
    big_qh_inv: F::Elem,
}

impl<F: Field> EvalPoint<F> {
    /// Builds a point with `Q^{1/2}` derived from `q^{1/2}` by the series rule.
    pub fn new(field: F, series: Series, n: u32, qh: F::Elem, uh: F::Elem) -> Result<Self, ArithError> {
        let big_qh = field.pow(&qh, series.q_exponent_sign() * n as i64)?;
        Self::with_big_qh(field, series, n, qh, uh, big_qh)
    }

    /// Builds a point with an explicit `Q^{1/2}`.
    pub fn with_big_qh(
        field: F,
        series: Series,
        n: u32,
        qh: F::Elem,
        uh: F::Elem,
        big_qh: F::Elem,
    ) -> Result<Self, ArithError> {
        let qh_inv = field.inv(&qh).map_err(|_| ArithError::Degenerate("q = 0".into()))?;
        let uh_inv = field.inv(&uh).map_err(|_| ArithError::Degenerate("u = 0".into()))?;
        let big_qh_inv = field.inv(&big_qh).map_err(|_| ArithError::Degenerate("Q = 0".into()))?;
        let p = EvalPoint { field, series, n, qh, uh, big_qh, qh_inv, uh_inv, big_qh_inv };
        if p.field.is_zero(&p.q_minus_q_inv()) {
            return Err(ArithError::Degenerate("q - 1/q = 0".into()));
        }
        Ok(p)
    }

    /// Same `q` and `Q`, new spectral variable.
    pub fn with_uh(&self, uh: F::Elem) -> Result<Self, ArithError> {
        let uh_inv = self.field.inv(&uh).map_err(|_| ArithError::Degenerate("u = 0".into()))?;
        Ok(EvalPoint { uh, uh_inv, ..self.clone() })
    }

    /// The point with `u` replaced by `u^{-1}`.
    pub fn inverted_u(&self) -> Self {
        EvalPoint { uh: self.uh_inv.clone(), uh_inv: self.uh.clone(), ..self.clone() }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn backend(&self) -> Backend {
        self.field.backend()
    }

    pub fn qh(&self) -> &F::Elem {
        &self.qh
    }

    pub fn uh(&self) -> &F::Elem {
        &self.uh
    }

    pub fn big_qh(&self) -> &F::Elem {
        &self.big_qh
    }

    pub fn q(&self) -> F::Elem {
        self.field.mul(&self.qh, &self.qh)
    }

    pub fn q_inv(&self) -> F::Elem {
        self.field.mul(&self.qh_inv, &self.qh_inv)
    }

    pub fn u(&self) -> F::Elem {
        self.field.mul(&self.uh, &self.uh)
    }

    pub fn big_q(&self) -> F::Elem {
        self.field.mul(&self.big_qh, &self.big_qh)
    }

    pub fn big_q_inv(&self) -> F::Elem {
        self.field.mul(&self.big_qh_inv, &self.big_qh_inv)
    }

    /// `q - q^{-1}`
    pub fn q_minus_q_inv(&self) -> F::Elem {
        self.field.sub(&self.q(), &self.q_inv())
    }

    /// The argument of the base R-matrix matching this point's `x`: `u^2`.
    pub fn r_argument(&self) -> F::Elem {
        let u = self.u();
        self.field.mul(&u, &u)
    }

    /// `q^{c2/2}`
    pub fn q_half_pow(&self, c2: i64) -> F::Elem {
        half_pow(&self.field, &self.qh, &self.qh_inv, c2)
    }

    /// `Q^a u^b q^c` with all exponents in halves.
    pub fn monomial(&self, t: BracketTriple) -> F::Elem {
        let f = &self.field;
        let a = half_pow(f, &self.big_qh, &self.big_qh_inv, t.a2 as i64);
        let b = half_pow(f, &self.uh, &self.uh_inv, t.b2 as i64);
        let c = half_pow(f, &self.qh, &self.qh_inv, t.c2 as i64);
        f.mul(&f.mul(&a, &b), &c)
    }

    /// Checks `[m]_q ≠ 0` for `1 ≤ m ≤ bound` and that the normalization `k` is nonzero.
    pub fn check_admissible(&self, bound: u32) -> Result<(), ArithError> {
        let f = &self.field;
        let q2 = f.mul(&self.q(), &self.q());
        let mut acc = f.one();
        for m in 1..=bound {
            acc = f.mul(&acc, &q2);
            if f.is_one(&acc) {
                return Err(ArithError::Degenerate(format!("[{m}] = 0")));
            }
        }
        if f.is_zero(&k_norm(self)?) {
            return Err(ArithError::Degenerate("k = 0".into()));
        }
        Ok(())
    }

    pub fn is_admissible(&self) -> bool {
        self.check_admissible(admissibility_bound(self.n)).is_ok()
    }
}

fn half_pow<F: Field>(f: &F, h: &F::Elem, h_inv: &F::Elem, e2: i64) -> F::Elem {
    if e2 >= 0 {
        f.powu(h, e2 as u64)
    } else {
        f.powu(h_inv, e2.unsigned_abs())
    }
}

/// The guard `4n + 16` on quantum-integer degeneracies.
pub fn admissibility_bound(n: u32) -> u32 {
    4 * n + 16
}

/// `[an+bx+c] = (Q^a u^b q^c - Q^{-a} u^{-b} q^{-c}) / (q - q^{-1})`
pub fn bracket_eval<F: Field>(t: BracketTriple, p: &EvalPoint<F>) -> Result<F::Elem, ArithError> {
    let f = p.field();
    let num = f.sub(&p.monomial(t), &p.monomial(t.neg()));
    f.div(&num, &p.q_minus_q_inv())
        .map_err(|_| ArithError::Degenerate("q - 1/q = 0".into()))
}

/// `{an+bx+c} = Q^a u^b q^c + Q^{-a} u^{-b} q^{-c}`
pub fn brace_eval<F: Field>(t: BracketTriple, p: &EvalPoint<F>) -> F::Elem {
    p.field().add(&p.monomial(t), &p.monomial(t.neg()))
}

/// `k = [x][x-1][x+n/2][x+n/2-1]^2`
pub fn k_norm<F: Field>(p: &EvalPoint<F>) -> Result<F::Elem, ArithError> {
    let f = p.field();
    let mut acc = f.one();
    for t in [
        BracketTriple::ints(0, 1, 0),
        BracketTriple::ints(0, 1, -1),
        BracketTriple::halves(1, 2, 0),
        BracketTriple::halves(1, 2, -2),
        BracketTriple::halves(1, 2, -2),
    ] {
        acc = f.mul(&acc, &bracket_eval(t, p)?);
    }
    Ok(acc)
}

/// Draws `q^{1/2}` and `u^{1/2}` from a seeded stream until the point is admissible.
pub fn sample_admissible_point<F: Field>(
    field: &F,
    series: Series,
    n: u32,
    seed: u64,
) -> Result<EvalPoint<F>, ArithError> {
    if n < 3 {
        return Err(ArithError::Degenerate(format!("n = {n} is below 3")));
    }
    let bound = admissibility_bound(n);
    if let Backend::Prime { p } = field.backend() {
        if p <= bound as u64 {
            return Err(ArithError::FieldTooSmall { p, bound: bound as u64 });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_SAMPLE_ATTEMPTS {
        let qh = field.sample_nonzero(&mut rng);
        let uh = field.sample_nonzero(&mut rng);
        let Ok(point) = EvalPoint::new(field.clone(), series, n, qh, uh) else {
            continue;
        };
        if point.check_admissible(bound).is_ok() {
            return Ok(point);
        }
    }
    Err(ArithError::Exhausted(MAX_SAMPLE_ATTEMPTS))
}

/// Redraws only the spectral variable, keeping `q`, until admissible.
pub fn resample_spectral<F: Field>(
    base: &EvalPoint<F>,
    rng: &mut ChaCha8Rng,
) -> Result<EvalPoint<F>, ArithError> {
    let bound = admissibility_bound(base.n());
    for _ in 0..MAX_SAMPLE_ATTEMPTS {
        let uh = base.field().sample_nonzero(rng);
        let point = base.with_uh(uh)?;
        if point.check_admissible(bound).is_ok() {
            return Ok(point);
        }
    }
    Err(ArithError::Exhausted(MAX_SAMPLE_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_rational, PrimeField, RationalField};

    fn rational_point(qh: &str, uh: &str) -> EvalPoint<RationalField> {
        let qh = parse_rational(qh).unwrap();
        let uh = parse_rational(uh).unwrap();
        EvalPoint::new(RationalField, Series::So, 9, qh, uh).unwrap()
    }

    #[test]
    fn trivial_brackets() {
        let p = rational_point("3/2", "5/7");
        let f = RationalField;
        assert_eq!(bracket_eval(BracketTriple::ints(0, 0, 0), &p).unwrap(), f.zero());
        assert_eq!(bracket_eval(BracketTriple::ints(0, 0, 1), &p).unwrap(), f.one());
        assert_eq!(brace_eval(BracketTriple::ints(0, 0, 0), &p), f.from_i64(2));
    }

    #[test]
    fn bracket_two_at_q_two() {
        // q = 2 needs q^{1/2} = sqrt 2, which exists modulo 2^61 - 1
        let f = PrimeField::default();
        let qh = f.sqrt(2).unwrap();
        let p = EvalPoint::new(f, Series::So, 9, qh, 1).unwrap();
        let five_halves = f.div(&5, &2).unwrap();
        assert_eq!(bracket_eval(BracketTriple::ints(0, 0, 2), &p).unwrap(), five_halves);
        assert_eq!(brace_eval(BracketTriple::ints(0, 0, 1), &p), five_halves);
        // over the rationals q^{1/2} = 2 gives [2] = q + 1/q = 17/4 and [1/2] = 2/5
        let r = rational_point("2", "1");
        assert_eq!(bracket_eval(BracketTriple::ints(0, 0, 2), &r).unwrap(), parse_rational("17/4").unwrap());
        assert_eq!(bracket_eval(BracketTriple::halves(0, 0, 1), &r).unwrap(), parse_rational("2/5").unwrap());
    }

    #[test]
    fn loop_value_matches_u_squared_coefficient() {
        let f = PrimeField::default();
        let p = sample_admissible_point(&f, Series::So, 9, 42).unwrap();
        let lhs = bracket_eval(BracketTriple::ints(1, 0, -1), &p).unwrap();
        let num = f.sub(&f.mul(&p.big_q(), &p.q_inv()), &f.mul(&p.big_q_inv(), &p.q()));
        let rhs = f.div(&num, &p.q_minus_q_inv()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn sampled_points_are_admissible_and_pinned() {
        let f = PrimeField::default();
        let p = sample_admissible_point(&f, Series::So, 9, 42).unwrap();
        assert_eq!(p.big_q(), f.powu(&p.q(), 9));
        assert!(p.check_admissible(52).is_ok());
        let s = sample_admissible_point(&f, Series::Sp, 8, 1).unwrap();
        assert_eq!(f.mul(&s.big_q(), &f.powu(&s.q(), 8)), 1);
        let again = sample_admissible_point(&f, Series::So, 9, 42).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn rational_sampling_is_admissible() {
        let p = sample_admissible_point(&RationalField, Series::So, 9, 7).unwrap();
        assert!(p.is_admissible());
    }

    #[test]
    fn small_fields_and_ranks_rejected() {
        let f = PrimeField::new(41).unwrap();
        assert!(matches!(
            sample_admissible_point(&f, Series::So, 9, 1),
            Err(ArithError::FieldTooSmall { .. })
        ));
        assert!(sample_admissible_point(&PrimeField::default(), Series::So, 2, 1).is_err());
    }

    #[test]
    fn triple_display() {
        assert_eq!(BracketTriple::halves(1, 2, -4).to_string(), "n/2+x-2");
        assert_eq!(BracketTriple::halves(0, 1, -2).to_string(), "x/2-1");
        assert_eq!(BracketTriple::ints(0, 0, 0).to_string(), "0");
        assert_eq!(BracketTriple::ints(0, 2, 0).to_string(), "2x");
    }
}
