use super::braid::frt_braid;
use super::tensor::TwoLegOp;
use super::RepError;
use crate::arith::{EvalPoint, Field, Series};

/// Braid generator, its inverse and the contraction `u` on `V ⊗ V` at a fixed point.
#[derive(Debug, Clone)]
pub struct RepFamily<F: Field> {
    point: EvalPoint<F>,
    sigma: TwoLegOp<F::Elem>,
    sigma_inv: TwoLegOp<F::Elem>,
    contraction: TwoLegOp<F::Elem>,
    identity: TwoLegOp<F::Elem>,
}

/// Builds and validates the family for `(series, n)` at `point`.
pub fn build_rep<F: Field>(series: Series, n: u32, point: &EvalPoint<F>) -> Result<RepFamily<F>, RepError> {
    if point.series() != series || point.n() != n {
        return Err(RepError::PointMismatch {
            expected: format!("{series}({n})"),
            found: format!("{}({})", point.series(), point.n()),
        });
    }
    if n < 3 {
        return Err(RepError::Degenerate(format!("n = {n} is below 3")));
    }
    let f = point.field();
    let braid = frt_braid(f, series, n as usize, point.qh());
    let sigma = match series {
        Series::So => braid,
        Series::Sp => braid.inverse(f)?.scale(f, &f.neg(&f.one())),
    };
    let fam = RepFamily::from_braid_unchecked(point.clone(), sigma)?;
    fam.validate()?;
    Ok(fam)
}

impl<F: Field> RepFamily<F> {
    /// Wraps an arbitrary braid generator without checking any relation.
    pub fn from_braid_unchecked(point: EvalPoint<F>, sigma: TwoLegOp<F::Elem>) -> Result<Self, RepError> {
        let f = point.field().clone();
        let n = point.n() as usize;
        if sigma.n() != n {
            return Err(RepError::Degenerate(format!("generator acts on dimension {}, expected {n}", sigma.n())));
        }
        let sigma_inv = sigma.inverse(&f)?;
        let identity = TwoLegOp::identity(&f, n);
        let d_inv = f.inv(&point.q_minus_q_inv())?;
        // u = 1 - (σ - σ^{-1}) / (q - q^{-1})
        let contraction = TwoLegOp::lin_comb(
            &f,
            &[(f.one(), &identity), (f.neg(&d_inv), &sigma), (d_inv, &sigma_inv)],
        );
        Ok(RepFamily { point, sigma, sigma_inv, contraction, identity })
    }

    pub fn point(&self) -> &EvalPoint<F> {
        &self.point
    }

    pub fn field(&self) -> &F {
        self.point.field()
    }

    pub fn n(&self) -> usize {
        self.point.n() as usize
    }

    pub fn series(&self) -> Series {
        self.point.series()
    }

    pub fn sigma(&self) -> &TwoLegOp<F::Elem> {
        &self.sigma
    }

    pub fn sigma_inv(&self) -> &TwoLegOp<F::Elem> {
        &self.sigma_inv
    }

    pub fn contraction(&self) -> &TwoLegOp<F::Elem> {
        &self.contraction
    }

    pub fn identity(&self) -> &TwoLegOp<F::Elem> {
        &self.identity
    }

    /// `δ = 1 + (Q q^{-1} - Q^{-1} q) / (q - q^{-1})`, the value of a closed loop.
    pub fn loop_value(&self) -> F::Elem {
        let p = &self.point;
        let f = p.field();
        let num = f.sub(&f.mul(&p.big_q(), &p.q_inv()), &f.mul(&p.big_q_inv(), &p.q()));
        f.add(&f.one(), &f.div(&num, &p.q_minus_q_inv()).expect("q - 1/q is nonzero"))
    }

    /// The three eigenvalues `q`, `-q^{-1}`, `Q^{-1} q` of the braid generator.
    pub fn eigenvalues(&self) -> [F::Elem; 3] {
        let p = &self.point;
        let f = p.field();
        [p.q(), f.neg(&p.q_inv()), f.mul(&p.big_q_inv(), &p.q())]
    }

    /// Coefficients of `σ`, `σ^{-1}` and the identity in `R(u)`.
    pub fn r_coefficients(&self, u: &F::Elem) -> Result<[F::Elem; 3], RepError> {
        let p = &self.point;
        let f = p.field();
        let u_inv = f.inv(u).map_err(|_| RepError::Degenerate("spectral argument is zero".into()))?;
        let c_sigma = f.mul(&f.sub(u, &f.one()), &p.q_inv());
        let c_inv = f.neg(&f.mul(&f.mul(&f.sub(&f.one(), &u_inv), &p.big_q_inv()), &p.q()));
        let c_id = f.neg(&f.mul(&p.q_minus_q_inv(), &f.sub(&f.mul(&p.big_q_inv(), &p.q()), &p.q_inv())));
        Ok([c_sigma, c_inv, c_id])
    }

    /// `R(u) = (u-1) q^{-1} σ - (1-u^{-1}) Q^{-1} q σ^{-1} - (q-q^{-1})(Q^{-1} q - q^{-1})`
    pub fn r_op(&self, u: &F::Elem) -> Result<TwoLegOp<F::Elem>, RepError> {
        let [a, b, c] = self.r_coefficients(u)?;
        Ok(TwoLegOp::lin_comb(self.field(), &[(a, &self.sigma), (b, &self.sigma_inv), (c, &self.identity)]))
    }

    /// `(σ - λ)` for one of the three eigenvalues.
    pub fn shifted_sigma(&self, lambda: &F::Elem) -> TwoLegOp<F::Elem> {
        let f = self.field();
        TwoLegOp::lin_comb(f, &[(f.one(), &self.sigma), (f.neg(lambda), &self.identity)])
    }

    /// Dimensions of the three eigenspaces of `σ` on `V ⊗ V`.
    pub fn eigenspace_dims(&self) -> [usize; 3] {
        let f = self.field();
        let nn = self.n() * self.n();
        self.eigenvalues().map(|l| nn - self.shifted_sigma(&l).to_dense(f).rank(f))
    }

    fn validate(&self) -> Result<(), RepError> {
        let f = self.field();
        let [l1, l2, l3] = self.eigenvalues();
        let (a, b, c) = (self.shifted_sigma(&l1), self.shifted_sigma(&l2), self.shifted_sigma(&l3));
        if !a.compose(f, &b).compose(f, &c).is_zero(f) {
            return Err(RepError::Relation("cubic relation for the braid generator".into()));
        }
        for (x, y, name) in [(&a, &b, "q, -1/q"), (&a, &c, "q, q/Q"), (&b, &c, "-1/q, q/Q")] {
            if x.compose(f, y).is_zero(f) {
                return Err(RepError::Relation(format!("braid generator lacks an eigenvalue outside {{{name}}}")));
            }
        }
        let u2 = self.contraction.compose(f, &self.contraction);
        let du = self.contraction.scale(f, &self.loop_value());
        if u2 != du {
            return Err(RepError::Relation("quadratic relation for the contraction".into()));
        }
        if self.contraction.to_dense(f).rank(f) != 1 {
            return Err(RepError::Relation("contraction has rank one".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{sample_admissible_point, PrimeField};

    fn family(series: Series, n: u32, seed: u64) -> RepFamily<PrimeField> {
        let f = PrimeField::default();
        let p = sample_admissible_point(&f, series, n, seed).unwrap();
        build_rep(series, n, &p).unwrap()
    }

    #[test]
    fn eigenspaces_of_so9() {
        assert_eq!(family(Series::So, 9, 42).eigenspace_dims(), [44, 36, 1]);
    }

    #[test]
    fn eigenspaces_of_sp8() {
        assert_eq!(family(Series::Sp, 8, 1).eigenspace_dims(), [27, 36, 1]);
    }

    #[test]
    fn r_at_one_is_scalar() {
        let fam = family(Series::So, 9, 3);
        let f = fam.field();
        let r1 = fam.r_op(&f.one()).unwrap();
        let p = fam.point();
        let c = f.neg(&f.mul(&p.q_minus_q_inv(), &f.sub(&f.mul(&p.big_q_inv(), &p.q()), &p.q_inv())));
        assert_eq!(r1, fam.identity().scale(f, &c));
        assert!(fam.r_op(&f.zero()).is_err());
    }

    #[test]
    fn mismatched_point_rejected() {
        let f = PrimeField::default();
        let p = sample_admissible_point(&f, Series::So, 9, 0).unwrap();
        assert!(matches!(build_rep(Series::So, 11, &p), Err(RepError::PointMismatch { .. })));
    }

    #[test]
    fn so_generator_with_wrong_series_point_fails_validation() {
        let f = PrimeField::default();
        let p = sample_admissible_point(&f, Series::Sp, 8, 5).unwrap();
        let braid = frt_braid(&f, Series::Sp, 8, p.qh());
        let fam = RepFamily::from_braid_unchecked(p, braid).unwrap();
        assert!(fam.validate().is_err());
    }
}
