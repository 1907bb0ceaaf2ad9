//! Scalar backends: a word-sized prime field and arbitrary-precision rationals.
//!
//! Every computation is parameterised by a field *context* implementing [`Field`].
//! Elements carry no backend tag; the type system keeps rational and prime values
//! apart, and [`Field::backend`] identifies the context at runtime.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ArithError;

/// The Mersenne prime 2^61 - 1, the default modulus.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

/// Runtime identity of a field context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Backend {
    Prime { p: u64 },
    Rational,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Prime { p } => write!(f, "prime:{p}"),
            Backend::Rational => f.write_str("rational"),
        }
    }
}

impl FromStr for Backend {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "rational" {
            return Ok(Backend::Rational);
        }
        if s == "prime" {
            return Ok(Backend::Prime { p: MERSENNE_61 });
        }
        match s.strip_prefix("prime:") {
            Some(rest) => {
                let p: u64 = rest.parse().map_err(|_| ArithError::Parse(s.to_string()))?;
                PrimeField::new(p)?;
                Ok(Backend::Prime { p })
            }
            None => Err(ArithError::Parse(s.to_string())),
        }
    }
}

/// A field context. Arithmetic is performed through the context so that the
/// prime backend can keep its modulus out of every element.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn backend(&self) -> Backend;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, ArithError>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// A random nonzero element, drawn from a backend-appropriate distribution.
    fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// Canonical text form: a residue in `[0, p)` or a reduced fraction `a/b`.
    fn render(&self, a: &Self::Elem) -> String;

    /// Parses an integer or a fraction `a/b` into the field.
    fn parse(&self, s: &str) -> Result<Self::Elem, ArithError>;

    /// `acc + a*b`
    fn mul_add(&self, acc: &Self::Elem, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(acc, &self.mul(a, b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, ArithError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn powu(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Integer power; negative exponents invert first.
    fn pow(&self, a: &Self::Elem, e: i64) -> Result<Self::Elem, ArithError> {
        if e >= 0 {
            Ok(self.powu(a, e as u64))
        } else {
            Ok(self.powu(&self.inv(a)?, e.unsigned_abs()))
        }
    }
}

/// Integers modulo an odd prime `p < 2^63`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: MERSENNE_61 }
    }
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, ArithError> {
        if !(3..1 << 63).contains(&p) || !is_prime_u64(p) {
            return Err(ArithError::InvalidModulus(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    fn reduce128(&self, x: u128) -> u64 {
        if self.p == MERSENNE_61 {
            // x < 2^122 for products of reduced operands
            let lo = (x as u64) & MERSENNE_61;
            let hi = (x >> 61) as u64;
            let s = lo + (hi & MERSENNE_61) + (hi >> 61);
            let s = (s & MERSENNE_61) + (s >> 61);
            if s >= MERSENNE_61 {
                s - MERSENNE_61
            } else {
                s
            }
        } else {
            (x % self.p as u128) as u64
        }
    }

    pub fn from_i128(&self, v: i128) -> u64 {
        let r = v.rem_euclid(self.p as i128);
        r as u64
    }

    /// Canonical reduction of a rational number; fails when `p` divides the denominator.
    pub fn reduce_rational(&self, r: &BigRational) -> Result<u64, ArithError> {
        let p = BigInt::from(self.p);
        let num = ((r.numer() % &p) + &p) % &p;
        let den = ((r.denom() % &p) + &p) % &p;
        let num = num.to_u64().expect("residue fits in u64");
        let den = den.to_u64().expect("residue fits in u64");
        self.div(&num, &den)
    }

    /// Square root when one exists (Tonelli-Shanks).
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        let p = self.p;
        if a == 0 {
            return Some(0);
        }
        if self.powu(&a, (p - 1) / 2) != 1 {
            return None;
        }
        let mut q = p - 1;
        let mut s = 0;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let mut z = 2;
        while self.powu(&z, (p - 1) / 2) == 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = self.powu(&z, q);
        let mut t = self.powu(&a, q);
        let mut r = self.powu(&a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0;
            let mut tt = t;
            while tt != 1 {
                tt = self.mul(&tt, &tt);
                i += 1;
            }
            let b = self.powu(&c, 1 << (m - i - 1));
            m = i;
            c = self.mul(&b, &b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        Some(r)
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn backend(&self) -> Backend {
        Backend::Prime { p: self.p }
    }

    #[inline]
    fn zero(&self) -> u64 {
        0
    }

    #[inline]
    fn one(&self) -> u64 {
        1
    }

    fn from_i64(&self, v: i64) -> u64 {
        self.from_i128(v as i128)
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.reduce128(*a as u128 * *b as u128)
    }

    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: &u64) -> Result<u64, ArithError> {
        if *a == 0 {
            return Err(ArithError::DivisionByZero);
        }
        // extended Euclid on signed 128-bit integers
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let qt = r0 / r1;
            (r0, r1) = (r1, r0 - qt * r1);
            (t0, t1) = (t1, t0 - qt * t1);
        }
        Ok(self.from_i128(t0))
    }

    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(1..self.p)
    }

    fn render(&self, a: &u64) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<u64, ArithError> {
        let r = parse_rational(s)?;
        self.reduce_rational(&r)
    }

    #[inline]
    fn mul_add(&self, acc: &u64, a: &u64, b: &u64) -> u64 {
        self.reduce128(*acc as u128 + *a as u128 * *b as u128)
    }
}

/// The rational numbers with arbitrary-precision numerator and denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RationalField;

impl RationalField {
    /// The nonnegative square root, when it is rational.
    pub fn sqrt(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_negative() {
            return None;
        }
        let root = |x: &BigInt| {
            let r = x.sqrt();
            (&r * &r == *x).then_some(r)
        };
        Some(BigRational::new(root(a.numer())?, root(a.denom())?))
    }
}

impl Field for RationalField {
    type Elem = BigRational;

    fn backend(&self) -> Backend {
        Backend::Rational
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational, ArithError> {
        if a.is_zero() {
            Err(ArithError::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    /// Small rationals `±a/b` with `1 ≤ a, b ≤ 12`, never `0` or `±1`.
    fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        loop {
            let a: i64 = rng.gen_range(1..=12);
            let b: i64 = rng.gen_range(1..=12);
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let r = BigRational::new(BigInt::from(sign * a), BigInt::from(b));
            if r.abs() != BigRational::one() {
                return r;
            }
        }
    }

    fn render(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn parse(&self, s: &str) -> Result<BigRational, ArithError> {
        parse_rational(s)
    }
}

/// Parses `a` or `a/b` with optional sign.
pub fn parse_rational(s: &str) -> Result<BigRational, ArithError> {
    let err = || ArithError::Parse(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(ArithError::DivisionByZero);
    }
    Ok(BigRational::new(num, den))
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mersenne_reduction_matches_generic() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let a = rng.gen_range(0..MERSENNE_61);
            let b = rng.gen_range(0..MERSENNE_61);
            let want = (a as u128 * b as u128 % MERSENNE_61 as u128) as u64;
            assert_eq!(f.mul(&a, &b), want);
        }
        assert_eq!(f.mul(&(MERSENNE_61 - 1), &(MERSENNE_61 - 1)), 1);
    }

    #[test]
    fn inverse_round_trips() {
        let f = PrimeField::new(1_000_000_007).unwrap();
        for a in [1u64, 2, 3, 999_999_999, 123_456_789] {
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
        }
        assert_eq!(f.inv(&0), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(PrimeField::new(1_000_000_008).is_err());
        assert!(PrimeField::new(2).is_err());
        assert!(is_prime_u64(MERSENNE_61));
        assert!(!is_prime_u64(MERSENNE_61 + 2));
    }

    #[test]
    fn backend_strings() {
        assert_eq!("rational".parse::<Backend>().unwrap(), Backend::Rational);
        assert_eq!(
            "prime:2305843009213693951".parse::<Backend>().unwrap(),
            Backend::Prime { p: MERSENNE_61 }
        );
        assert!("prime:15".parse::<Backend>().is_err());
        assert_eq!(Backend::Prime { p: 7 }.to_string(), "prime:7");
    }

    #[test]
    fn rational_parse_and_reduce() {
        let r = parse_rational("-3/4").unwrap();
        assert_eq!(RationalField.render(&r), "-3/4");
        let f = PrimeField::new(101).unwrap();
        let x = f.reduce_rational(&r).unwrap();
        assert_eq!(f.mul(&x, &4), f.from_i64(-3));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn sqrt_squares_back() {
        let f = PrimeField::new(1_000_000_009).unwrap();
        for a in [4u64, 9, 12345, 2] {
            if let Some(r) = f.sqrt(a) {
                assert_eq!(f.mul(&r, &r), a);
            }
        }
    }

    #[test]
    fn rational_sqrt_only_for_squares() {
        let q = RationalField;
        assert_eq!(q.sqrt(&parse_rational("9/4").unwrap()), Some(parse_rational("3/2").unwrap()));
        assert_eq!(q.sqrt(&parse_rational("25").unwrap()), Some(parse_rational("5").unwrap()));
        assert_eq!(q.sqrt(&parse_rational("3/2").unwrap()), None);
        assert_eq!(q.sqrt(&parse_rational("-4").unwrap()), None);
    }
}
