//! Parser for the printed notation, e.g. `-[x-1][x+2][n/2+x-2]` or
//! `{2x}{n/2-1}[2][n/2-2]\frac{[n+x-2]}{[n+x/2-1]}`.
//!
//! Juxtaposition is multiplication. Inside `[...]` and `{...}` the symbols
//! `n`, `x`, `α`, `β`, `γ` may appear with integer coefficients and a `/2`
//! divisor. Outside brackets `Q`, `u`, `q` denote monomials.

use super::expr::{BracketExpr, LinearForm};
use super::FormulaError;

pub fn parse_expr(src: &str) -> Result<BracketExpr, FormulaError> {
    let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser { chars, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, msg: &str) -> FormulaError {
        FormulaError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), FormulaError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<BracketExpr, FormulaError> {
        let mut terms = Vec::new();
        let mut negs = Vec::new();
        let mut neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            terms.push(self.term()?);
            negs.push(neg);
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    neg = false;
                }
                Some('-') => {
                    self.pos += 1;
                    neg = true;
                }
                _ => break,
            }
        }
        if terms.len() == 1 && !negs[0] {
            return Ok(terms.pop().expect("one term"));
        }
        let signed = terms
            .into_iter()
            .zip(negs)
            .map(|(t, n)| if n { BracketExpr::Neg(Box::new(t)) } else { t })
            .collect::<Vec<_>>();
        if signed.len() == 1 {
            return Ok(signed.into_iter().next().expect("one term"));
        }
        Ok(BracketExpr::Sum(signed))
    }

    fn term(&mut self) -> Result<BracketExpr, FormulaError> {
        let mut factors = Vec::new();
        while let Some(c) = self.peek() {
            if matches!(c, '+' | '-' | '}' | ')' | ']') {
                break;
            }
            factors.push(self.factor()?);
        }
        match factors.len() {
            0 => Err(self.error("empty term")),
            1 => Ok(factors.pop().expect("one factor")),
            _ => Ok(BracketExpr::Product(factors)),
        }
    }

    fn factor(&mut self) -> Result<BracketExpr, FormulaError> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = if self.eat('{') {
                let neg = self.eat('-');
                let v = self.digits()? as i32;
                self.expect('}')?;
                if neg {
                    -v
                } else {
                    v
                }
            } else {
                self.digits()? as i32
            };
            return Ok(BracketExpr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<BracketExpr, FormulaError> {
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                let l = self.linear(']')?;
                Ok(BracketExpr::Bracket(l))
            }
            Some('{') => {
                self.pos += 1;
                let l = self.linear('}')?;
                Ok(BracketExpr::Brace(l))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('\\') => {
                for c in "\\frac".chars() {
                    self.expect(c)?;
                }
                self.expect('{')?;
                let num = self.expr()?;
                self.expect('}')?;
                self.expect('{')?;
                let den = self.expr()?;
                self.expect('}')?;
                Ok(BracketExpr::quotient(num, den))
            }
            Some(c) if c.is_ascii_digit() => Ok(BracketExpr::Int(self.digits()? as i64)),
            Some('Q') => {
                self.pos += 1;
                Ok(BracketExpr::Mono(LinearForm { n2: 2, ..Default::default() }))
            }
            Some('u') => {
                self.pos += 1;
                Ok(BracketExpr::Mono(LinearForm { x2: 2, ..Default::default() }))
            }
            Some('q') => {
                self.pos += 1;
                Ok(BracketExpr::Mono(LinearForm { c2: 2, ..Default::default() }))
            }
            _ => Err(self.error("unexpected symbol")),
        }
    }

    fn digits(&mut self) -> Result<u32, FormulaError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.error("integer overflow"))
    }

    fn linear(&mut self, close: char) -> Result<LinearForm, FormulaError> {
        let mut form = LinearForm::default();
        let mut first = true;
        loop {
            let sign = if self.eat('-') {
                -1
            } else if self.eat('+') || first {
                1
            } else {
                return Err(self.error("expected '+' or '-'"));
            };
            first = false;
            let coef = if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                Some(self.digits()? as i32)
            } else {
                None
            };
            let sym = match self.peek() {
                Some(c @ ('n' | 'x' | 'α' | 'β' | 'γ')) => {
                    self.pos += 1;
                    Some(c)
                }
                _ => None,
            };
            if coef.is_none() && sym.is_none() {
                return Err(self.error("expected a coefficient or symbol"));
            }
            let halved = if self.eat('/') {
                if self.digits()? != 2 {
                    return Err(self.error("only /2 divisors are supported"));
                }
                true
            } else {
                false
            };
            let c = sign * coef.unwrap_or(1);
            let c2 = if halved { c } else { 2 * c };
            match sym {
                Some('n') => form.n2 += c2,
                Some('x') => form.x2 += c2,
                Some(g) => {
                    if halved {
                        return Err(self.error("Greek symbols take integer coefficients"));
                    }
                    let idx = match g {
                        'α' => 0,
                        'β' => 1,
                        _ => 2,
                    };
                    form.greek[idx] += c;
                }
                None => form.c2 += c2,
            }
            if self.eat(close) {
                return Ok(form);
            }
        }
    }
}
