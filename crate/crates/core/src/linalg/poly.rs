use rand::Rng;

use super::LinalgError;
use crate::arith::{Field, PrimeField};

/// Univariate polynomial, coefficients from low to high degree, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> Poly<E> {
    pub fn from_coeffs<F: Field<Elem = E>>(f: &F, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| f.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one<F: Field<Elem = E>>(f: &F) -> Self {
        Poly { coeffs: vec![f.one()] }
    }

    /// `X - r`
    pub fn linear<F: Field<Elem = E>>(f: &F, r: &E) -> Self {
        Poly { coeffs: vec![f.neg(r), f.one()] }
    }

    pub fn monomial<F: Field<Elem = E>>(f: &F, deg: usize) -> Self {
        let mut coeffs = vec![f.zero(); deg + 1];
        coeffs[deg] = f.one();
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn is_monic<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.leading().is_some_and(|c| f.is_one(c))
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = f.zero();
        let c = (0..n)
            .map(|i| f.add(self.coeffs.get(i).unwrap_or(&z), other.coeffs.get(i).unwrap_or(&z)))
            .collect();
        Poly::from_coeffs(f, c)
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = f.zero();
        let c = (0..n)
            .map(|i| f.sub(self.coeffs.get(i).unwrap_or(&z), other.coeffs.get(i).unwrap_or(&z)))
            .collect();
        Poly::from_coeffs(f, c)
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        Poly::from_coeffs(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.mul_add(&c[i + j], a, b);
            }
        }
        Poly::from_coeffs(f, c)
    }

    pub fn pow<F: Field<Elem = E>>(&self, f: &F, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one(f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        acc
    }

    pub fn eval<F: Field<Elem = E>>(&self, f: &F, x: &E) -> E {
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.mul_add(c, &acc, x);
        }
        acc
    }

    /// Quotient and remainder; errors on a zero divisor.
    pub fn divrem<F: Field<Elem = E>>(&self, f: &F, d: &Self) -> Result<(Self, Self), LinalgError> {
        let dl = d.leading().ok_or(LinalgError::ZeroPolynomial)?;
        let dinv = f.inv(dl).map_err(|_| LinalgError::ZeroPolynomial)?;
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![f.zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = f.mul(&r[k + dd], &dinv);
            if !f.is_zero(&c) {
                let neg = f.neg(&c);
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = f.mul_add(&r[k + j], &neg, dc);
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Poly::from_coeffs(f, q), Poly::from_coeffs(f, r)))
    }

    pub fn rem<F: Field<Elem = E>>(&self, f: &F, d: &Self) -> Result<Self, LinalgError> {
        Ok(self.divrem(f, d)?.1)
    }

    pub fn monic<F: Field<Elem = E>>(&self, f: &F) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(f, &f.inv(l).expect("nonzero leading coefficient")),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// `self^e mod m`.
    pub fn powmod<F: Field<Elem = E>>(&self, f: &F, mut e: u64, m: &Self) -> Result<Self, LinalgError> {
        let mut base = self.rem(f, m)?;
        let mut acc = Poly::one(f).rem(f, m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base).rem(f, m)?;
            }
            base = base.mul(f, &base).rem(f, m)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Divides out exactly `k` factors of `X`, failing if they are not present.
    pub fn div_x_power<F: Field<Elem = E>>(&self, f: &F, k: usize) -> Result<Self, LinalgError> {
        if self.coeffs.len() < k || self.coeffs[..k].iter().any(|c| !f.is_zero(c)) {
            return Err(LinalgError::NotDivisible);
        }
        Ok(Poly { coeffs: self.coeffs[k..].to_vec() })
    }

    /// The monic `g` with `g^d = self`, for monic `self` in characteristic above its degree.
    pub fn nth_root<F: Field<Elem = E>>(&self, f: &F, d: u32) -> Result<Self, LinalgError> {
        if d == 0 || !self.is_monic(f) {
            return Err(LinalgError::NotPerfectPower);
        }
        let big_n = self.coeffs.len() - 1;
        if big_n % d as usize != 0 {
            return Err(LinalgError::NotPerfectPower);
        }
        let m = big_n / d as usize;
        // reversed series F(t) = 1 + f_1 t + ..., with f_j = coefficient of X^{N-j}
        let fr: Vec<E> = (0..=big_n).map(|j| self.coeffs[big_n - j].clone()).collect();
        let dinv = f.inv(&f.from_i64(d as i64)).map_err(|_| LinalgError::NotPerfectPower)?;
        let mut h = vec![f.one()];
        for k in 1..=m {
            let mut acc = f.zero();
            for j in 1..=k.min(big_n) {
                // ((1/d + 1) j - k) f_j h_{k-j}
                let c = f.sub(&f.mul(&f.from_i64(((d as i64) + 1) * j as i64), &dinv), &f.from_i64(k as i64));
                acc = f.add(&acc, &f.mul(&c, &f.mul(&fr[j], &h[k - j])));
            }
            let kinv = f.inv(&f.from_i64(k as i64)).map_err(|_| LinalgError::NotPerfectPower)?;
            h.push(f.mul(&acc, &kinv));
        }
        let g = Poly::from_coeffs(f, h.into_iter().rev().collect());
        if g.pow(f, d) == *self {
            Ok(g)
        } else {
            Err(LinalgError::NotPerfectPower)
        }
    }
}

/// Roots in `F_p` with multiplicities, in ascending order of the root.
pub fn roots_with_multiplicity<R: Rng + ?Sized>(
    f: &PrimeField,
    poly: &Poly<u64>,
    rng: &mut R,
) -> Result<Vec<(u64, usize)>, LinalgError> {
    if poly.is_zero() {
        return Err(LinalgError::ZeroPolynomial);
    }
    let p = f.modulus();
    let monic = poly.monic(f);
    let x = Poly::monomial(f, 1);
    let xp = x.powmod(f, p, &monic)?;
    let split = xp.sub(f, &x).gcd(f, &monic);
    let mut roots = Vec::new();
    split_linear(f, &split, rng, &mut roots)?;
    roots.sort_unstable();
    let mut out = Vec::new();
    for r in roots {
        let lin = Poly::linear(f, &r);
        let mut rest = monic.clone();
        let mut mult = 0;
        loop {
            let (q, rem) = rest.divrem(f, &lin)?;
            if !rem.is_zero() {
                break;
            }
            rest = q;
            mult += 1;
        }
        out.push((r, mult));
    }
    Ok(out)
}

/// Equal-degree splitting of a squarefree product of distinct linear factors.
fn split_linear<R: Rng + ?Sized>(
    f: &PrimeField,
    g: &Poly<u64>,
    rng: &mut R,
    out: &mut Vec<u64>,
) -> Result<(), LinalgError> {
    match g.degree() {
        None | Some(0) => return Ok(()),
        Some(1) => {
            out.push(f.neg(&g.coeffs()[0]));
            return Ok(());
        }
        _ => {}
    }
    let half = (f.modulus() - 1) / 2;
    for _ in 0..128 {
        let a = rng.gen_range(0..f.modulus());
        let shifted = Poly::from_coeffs(f, vec![a, 1]);
        let t = shifted.powmod(f, half, g)?.sub(f, &Poly::one(f));
        let d = t.gcd(f, g);
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && Some(dd) < g.degree() {
            let (other, _) = g.divrem(f, &d)?;
            split_linear(f, &d, rng, out)?;
            split_linear(f, &other.monic(f), rng, out)?;
            return Ok(());
        }
    }
    Err(LinalgError::SplittingFailed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::RationalField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn from_roots(f: &PrimeField, roots: &[u64]) -> Poly<u64> {
        roots.iter().fold(Poly::one(f), |acc, r| acc.mul(f, &Poly::linear(f, r)))
    }

    #[test]
    fn divrem_reconstructs() {
        let f = PrimeField::default();
        let a = Poly::from_coeffs(&f, vec![3, 1, 4, 1, 5, 9]);
        let b = Poly::from_coeffs(&f, vec![2, 6, 5]);
        let (q, r) = a.divrem(&f, &b).unwrap();
        assert_eq!(q.mul(&f, &b).add(&f, &r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_of_shared_roots() {
        let f = PrimeField::default();
        let a = from_roots(&f, &[1, 2, 3]);
        let b = from_roots(&f, &[2, 3, 7]);
        assert_eq!(a.gcd(&f, &b), from_roots(&f, &[2, 3]));
    }

    #[test]
    fn roots_with_multiplicities() {
        let f = PrimeField::default();
        let p = from_roots(&f, &[5, 5, 5, 9, 123456789, 9, 77]);
        let extra = Poly::from_coeffs(&f, vec![1, 0, 1]).pow(&f, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = roots_with_multiplicity(&f, &p.mul(&f, &extra), &mut rng).unwrap();
        assert_eq!(r, vec![(5, 3), (9, 2), (77, 1), (123456789, 1)]);
    }

    #[test]
    fn nth_root_recovers_base() {
        let f = PrimeField::default();
        let g = Poly::from_coeffs(&f, vec![7, 0, 11, 1]);
        assert_eq!(g.pow(&f, 36).nth_root(&f, 36).unwrap(), g);
        let bumped = g.pow(&f, 4).add(&f, &Poly::one(&f));
        assert_eq!(bumped.nth_root(&f, 4), Err(LinalgError::NotPerfectPower));
        let q = RationalField;
        let h = Poly::from_coeffs(&q, vec![q.from_i64(-2), q.from_i64(1)]);
        assert_eq!(h.pow(&q, 3).nth_root(&q, 3).unwrap(), h);
    }

    #[test]
    fn x_power_division() {
        let f = PrimeField::default();
        let p = Poly::from_coeffs(&f, vec![0, 0, 4, 1]);
        assert_eq!(p.div_x_power(&f, 2).unwrap(), Poly::from_coeffs(&f, vec![4, 1]));
        assert_eq!(p.div_x_power(&f, 3), Err(LinalgError::NotDivisible));
    }
}
