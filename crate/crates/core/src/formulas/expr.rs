//! Expression trees over brackets, braces and monomials in `Q`, `u`, `q`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::FormulaError;
use crate::arith::{brace_eval, bracket_eval, BracketTriple, EvalPoint, Field};

/// Substitution values for the universal parameters, in units of 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniversalParams {
    pub alpha2: i32,
    pub beta2: i32,
    pub gamma2: i32,
}

/// A linear form `a n + b x + c + i α + j β + k γ` inside a bracket.
/// `n`, `x` and the constant are in halves; the Greek coefficients are integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LinearForm {
    pub n2: i32,
    pub x2: i32,
    pub c2: i32,
    pub greek: [i32; 3],
}

impl LinearForm {
    pub fn is_universal(&self) -> bool {
        self.greek != [0; 3]
    }

    /// Resolves Greek symbols to a plain triple.
    pub fn resolve(&self, params: Option<&UniversalParams>) -> Result<BracketTriple, FormulaError> {
        let mut c2 = self.c2;
        if self.is_universal() {
            let p = params.ok_or(FormulaError::MissingParams)?;
            c2 += self.greek[0] * p.alpha2 + self.greek[1] * p.beta2 + self.greek[2] * p.gamma2;
        }
        Ok(BracketTriple::halves(self.n2, self.x2, c2))
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut push = |coef2: i32, sym: &str, halves: bool| {
            if coef2 == 0 {
                return;
            }
            let (mag, neg) = (coef2.unsigned_abs(), coef2 < 0);
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let text = match (halves, sym.is_empty()) {
                (true, true) if mag % 2 == 0 => (mag / 2).to_string(),
                (true, true) => format!("{mag}/2"),
                (true, false) if mag == 2 => sym.to_string(),
                (true, false) if mag == 1 => format!("{sym}/2"),
                (true, false) if mag % 2 == 0 => format!("{}{sym}", mag / 2),
                (true, false) => format!("{mag}{sym}/2"),
                (false, _) if mag == 1 => sym.to_string(),
                (false, _) => format!("{mag}{sym}"),
            };
            out.push_str(&text);
        };
        push(self.x2, "x", true);
        push(self.n2, "n", true);
        push(self.greek[0], "α", false);
        push(self.greek[1], "β", false);
        push(self.greek[2], "γ", false);
        push(self.c2, "", true);
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BracketExpr {
    Int(i64),
    /// `[form]`
    Bracket(LinearForm),
    /// `{form}`
    Brace(LinearForm),
    /// `Q^a u^b q^c` read off the form's `n`, `x` and constant coefficients.
    Mono(LinearForm),
    Sum(Vec<BracketExpr>),
    Product(Vec<BracketExpr>),
    Quotient(Box<BracketExpr>, Box<BracketExpr>),
    Neg(Box<BracketExpr>),
    Pow(Box<BracketExpr>, i32),
}

impl BracketExpr {
    pub fn product(factors: Vec<BracketExpr>) -> Self {
        BracketExpr::Product(factors)
    }

    pub fn quotient(num: BracketExpr, den: BracketExpr) -> Self {
        BracketExpr::Quotient(Box::new(num), Box::new(den))
    }

    pub fn is_universal(&self) -> bool {
        use BracketExpr::*;
        match self {
            Int(_) => false,
            Bracket(l) | Brace(l) | Mono(l) => l.is_universal(),
            Sum(v) | Product(v) => v.iter().any(Self::is_universal),
            Quotient(a, b) => a.is_universal() || b.is_universal(),
            Neg(a) | Pow(a, _) => a.is_universal(),
        }
    }

    /// Leaf-wise evaluation composed through the tree.
    pub fn eval<F: Field>(
        &self,
        p: &EvalPoint<F>,
        params: Option<&UniversalParams>,
    ) -> Result<F::Elem, FormulaError> {
        use BracketExpr::*;
        let f = p.field();
        Ok(match self {
            Int(v) => f.from_i64(*v),
            Bracket(l) => bracket_eval(l.resolve(params)?, p)?,
            Brace(l) => brace_eval(l.resolve(params)?, p),
            Mono(l) => p.monomial(l.resolve(params)?),
            Sum(terms) => {
                let mut acc = f.zero();
                for t in terms {
                    acc = f.add(&acc, &t.eval(p, params)?);
                }
                acc
            }
            Product(factors) => {
                let mut acc = f.one();
                for t in factors {
                    acc = f.mul(&acc, &t.eval(p, params)?);
                }
                acc
            }
            Quotient(num, den) => {
                let d = den.eval(p, params)?;
                if f.is_zero(&d) {
                    return Err(FormulaError::ZeroDenominator(den.to_string()));
                }
                f.div(&num.eval(p, params)?, &d)?
            }
            Neg(a) => f.neg(&a.eval(p, params)?),
            Pow(a, e) => {
                let v = a.eval(p, params)?;
                if *e < 0 && f.is_zero(&v) {
                    return Err(FormulaError::ZeroDenominator(a.to_string()));
                }
                f.pow(&v, *e as i64)?
            }
        })
    }
}

impl fmt::Display for BracketExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use BracketExpr::*;
        match self {
            Int(v) => write!(f, "{v}"),
            Bracket(l) => write!(f, "[{l}]"),
            Brace(l) => write!(f, "{{{l}}}"),
            Mono(l) => {
                let mut parts = Vec::new();
                for (coef2, sym) in [(l.n2, "Q"), (l.x2, "u"), (l.c2, "q")] {
                    match coef2 {
                        0 => {}
                        2 => parts.push(sym.to_string()),
                        c if c % 2 == 0 => parts.push(format!("{sym}^{{{}}}", c / 2)),
                        c => parts.push(format!("{sym}^{{{c}/2}}")),
                    }
                }
                if parts.is_empty() {
                    f.write_str("1")
                } else {
                    f.write_str(&parts.join(""))
                }
            }
            Sum(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    match t {
                        Neg(inner) => write!(f, "-{}", Wrapped(inner))?,
                        _ if i == 0 => write!(f, "{}", Wrapped(t))?,
                        _ => write!(f, "+{}", Wrapped(t))?,
                    }
                }
                Ok(())
            }
            Product(factors) => {
                for t in factors {
                    match t {
                        Sum(_) => write!(f, "({t})")?,
                        _ => write!(f, "{t}")?,
                    }
                }
                Ok(())
            }
            Quotient(a, b) => write!(f, "\\frac{{{a}}}{{{b}}}"),
            Neg(a) => write!(f, "-{}", Wrapped(a)),
            Pow(a, e) => {
                let exp = if (0..10).contains(e) { format!("^{e}") } else { format!("^{{{e}}}") };
                match a.as_ref() {
                    Sum(_) | Product(_) | Neg(_) => write!(f, "({a}){exp}"),
                    _ => write!(f, "{a}{exp}"),
                }
            }
        }
    }
}

struct Wrapped<'a>(&'a BracketExpr);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            BracketExpr::Sum(_) => write!(f, "({})", self.0),
            other => write!(f, "{other}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{sample_admissible_point, PrimeField, Series};

    #[test]
    fn greek_forms_need_params() {
        let l = LinearForm { x2: 2, greek: [1, 0, 0], ..Default::default() };
        assert_eq!(l.resolve(None), Err(FormulaError::MissingParams));
        let params = UniversalParams { alpha2: -2, beta2: 4, gamma2: 5 };
        assert_eq!(l.resolve(Some(&params)).unwrap(), BracketTriple::halves(0, 2, -2));
    }

    #[test]
    fn zero_denominator_is_reported() {
        let f = PrimeField::default();
        let p = sample_admissible_point(&f, Series::So, 9, 4).unwrap();
        let e = BracketExpr::quotient(BracketExpr::Int(1), BracketExpr::Bracket(LinearForm::default()));
        assert!(matches!(e.eval(&p, None), Err(FormulaError::ZeroDenominator(_))));
    }

    #[test]
    fn linear_form_display() {
        let l = LinearForm { n2: 1, x2: 2, c2: -4, greek: [0; 3] };
        assert_eq!(l.to_string(), "x+n/2-2");
        let g = LinearForm { greek: [1, 1, 1], c2: -2, ..Default::default() };
        assert_eq!(g.to_string(), "α+β+γ-1");
    }
}
