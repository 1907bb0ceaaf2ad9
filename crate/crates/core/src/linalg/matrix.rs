use super::{LinalgError, Poly};
use crate::arith::Field;

/// Dense row-major matrix over a field's element type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<E>]) -> Self {
        Matrix::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }
}

impl<E: Clone + PartialEq> Matrix<E> {
    pub fn zeros<F: Field<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![f.zero(); rows * cols] }
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { f.one() } else { f.zero() })
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.data.iter().all(|x| f.is_zero(x))
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        let data = self.data.iter().map(|a| f.mul(a, c)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                let brow = other.row(k);
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o = f.mul_add(o, a, b);
                }
            }
        }
        out
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    acc = f.mul_add(&acc, a, b);
                }
                acc
            })
            .collect()
    }

    pub fn trace<F: Field<Elem = E>>(&self, f: &F) -> E {
        let mut acc = f.zero();
        for i in 0..self.rows.min(self.cols) {
            acc = f.add(&acc, self.get(i, i));
        }
        acc
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref<F: Field<Elem = E>>(&self, f: &F) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = rref_in_place(f, &mut m.data, m.rows, m.cols);
        (m, pivots)
    }

    pub fn rank<F: Field<Elem = E>>(&self, f: &F) -> usize {
        self.rref(f).1.len()
    }

    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                f.one()
            } else {
                f.zero()
            }
        });
        let (r, piv) = aug.rref(f);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok(Matrix::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// Basis of the right nullspace `{v : M v = 0}`.
    pub fn nullspace<F: Field<Elem = E>>(&self, f: &F) -> Vec<Vec<E>> {
        let (r, piv) = self.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &p in &piv {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (row, &p) in piv.iter().enumerate() {
                v[p] = f.neg(r.get(row, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Characteristic polynomial `det(X - M)` via reduction to Hessenberg form.
    pub fn charpoly<F: Field<Elem = E>>(&self, f: &F) -> Poly<E> {
        assert!(self.is_square(), "charpoly of a non-square matrix");
        let n = self.rows;
        let mut h = self.clone();
        hessenberg_in_place(f, &mut h);
        // p_k(X) = (X - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{j=i+1..k} h_{j,j-1}) p_{i-1}
        let mut ps: Vec<Poly<E>> = vec![Poly::one(f)];
        for k in 0..n {
            let x_minus = Poly::from_coeffs(f, vec![f.neg(h.get(k, k)), f.one()]);
            let mut pk = x_minus.mul(f, &ps[k]);
            let mut prod = f.one();
            for i in (0..k).rev() {
                prod = f.mul(&prod, h.get(i + 1, i));
                if f.is_zero(&prod) {
                    break;
                }
                let c = f.mul(&prod, h.get(i, k));
                pk = pk.sub(f, &ps[i].scale(f, &c));
            }
            ps.push(pk);
        }
        ps.pop().expect("charpoly chain")
    }
}

/// Gauss-Jordan elimination on a row-major buffer; returns pivot columns.
pub(crate) fn rref_in_place<F: Field>(f: &F, a: &mut [F::Elem], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(k) = (r..rows).find(|&i| !f.is_zero(&a[i * cols + c])) else {
            continue;
        };
        if k != r {
            for j in 0..cols {
                a.swap(r * cols + j, k * cols + j);
            }
        }
        let inv = f.inv(&a[r * cols + c]).expect("nonzero pivot");
        for j in c..cols {
            a[r * cols + j] = f.mul(&a[r * cols + j], &inv);
        }
        let pivot_row: Vec<F::Elem> = a[r * cols + c..(r + 1) * cols].to_vec();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a[i * cols + c].clone();
            if f.is_zero(&factor) {
                continue;
            }
            let neg = f.neg(&factor);
            for (off, pv) in pivot_row.iter().enumerate() {
                let idx = i * cols + c + off;
                a[idx] = f.mul_add(&a[idx], &neg, pv);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn hessenberg_in_place<F: Field>(f: &F, h: &mut Matrix<F::Elem>) {
    let n = h.rows;
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| !f.is_zero(h.get(i, m - 1))) else {
            continue;
        };
        if i != m {
            for j in 0..n {
                h.data.swap(i * n + j, m * n + j);
            }
            for r in 0..n {
                h.data.swap(r * n + i, r * n + m);
            }
        }
        let inv = f.inv(h.get(m, m - 1)).expect("nonzero pivot");
        for i in m + 1..n {
            let t = f.mul(h.get(i, m - 1), &inv);
            if f.is_zero(&t) {
                continue;
            }
            let neg = f.neg(&t);
            for j in 0..n {
                let v = f.mul_add(h.get(i, j), &neg, h.get(m, j));
                h.set(i, j, v);
            }
            for r in 0..n {
                let v = f.mul_add(h.get(r, m), &t, h.get(r, i));
                h.set(r, m, v);
            }
        }
    }
}

/// Incrementally maintained row-reduced basis of a subspace, used to grow
/// spans one vector at a time.
#[derive(Debug, Clone)]
pub struct SpanBuilder<E> {
    len: usize,
    rows: Vec<Vec<E>>,
    pivots: Vec<usize>,
}

impl<E: Clone + PartialEq> SpanBuilder<E> {
    pub fn new(len: usize) -> Self {
        SpanBuilder { len, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current basis; the remainder is zero iff `v` lies in the span.
    pub fn reduce<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        assert_eq!(v.len(), self.len);
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&w[p]) {
                continue;
            }
            let neg = f.neg(&w[p]);
            for (x, r) in w.iter_mut().zip(row) {
                if !f.is_zero(r) {
                    *x = f.mul_add(x, &neg, r);
                }
            }
        }
        w
    }

    /// Adds `v` if independent; returns whether the span grew.
    pub fn insert<F: Field<Elem = E>>(&mut self, f: &F, v: &[E]) -> bool {
        let mut w = self.reduce(f, v);
        let Some(p) = w.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&w[p]).expect("nonzero pivot");
        for x in w.iter_mut() {
            *x = f.mul(x, &inv);
        }
        for row in self.rows.iter_mut() {
            if f.is_zero(&row[p]) {
                continue;
            }
            let neg = f.neg(&row[p]);
            for (x, r) in row.iter_mut().zip(&w) {
                if !f.is_zero(r) {
                    *x = f.mul_add(x, &neg, r);
                }
            }
        }
        self.rows.push(w);
        self.pivots.push(p);
        true
    }

    pub fn contains<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> bool {
        self.reduce(f, v).iter().all(|x| f.is_zero(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{PrimeField, RationalField};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random(f: &PrimeField, n: usize, seed: u64) -> Matrix<u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Matrix::from_fn(n, n, |_, _| f.sample_nonzero(&mut rng))
    }

    #[test]
    fn inverse_round_trips() {
        let f = PrimeField::default();
        let a = random(&f, 7, 1);
        let ai = a.inverse(&f).unwrap();
        assert_eq!(a.mul(&f, &ai), Matrix::identity(&f, 7));
    }

    #[test]
    fn singular_matrix_detected() {
        let f = RationalField;
        let a = Matrix::from_fn(2, 2, |i, j| f.from_i64(((i + 1) * (j + 1)) as i64));
        assert_eq!(a.inverse(&f), Err(LinalgError::Singular));
        assert_eq!(a.rank(&f), 1);
        let ns = a.nullspace(&f);
        assert_eq!(ns.len(), 1);
        assert!(a.mul_vec(&f, &ns[0]).iter().all(|x| f.is_zero(x)));
    }

    #[test]
    fn charpoly_annihilates_matrix() {
        let f = PrimeField::default();
        let a = random(&f, 6, 3);
        let cp = a.charpoly(&f);
        assert_eq!(cp.degree(), Some(6));
        let mut acc = Matrix::zeros(&f, 6, 6);
        for c in cp.coeffs().iter().rev() {
            acc = acc.mul(&f, &a).add(&f, &Matrix::identity(&f, 6).scale(&f, c));
        }
        assert!(acc.is_zero(&f));
        assert_eq!(cp.coeffs()[5], f.neg(&a.trace(&f)));
    }

    #[test]
    fn charpoly_of_companion_matrix() {
        let f = RationalField;
        // companion of X^3 - 2X^2 + 3X - 5, with zeros forcing row swaps
        let c = |v: i64| f.from_i64(v);
        let a = Matrix::from_vec(
            3,
            3,
            vec![c(0), c(0), c(5), c(1), c(0), c(-3), c(0), c(1), c(2)],
        );
        let cp = a.charpoly(&f);
        assert_eq!(cp.coeffs(), &[c(-5), c(3), c(-2), c(1)]);
        let b = Matrix::from_vec(3, 3, vec![c(1), c(2), c(0), c(0), c(1), c(0), c(0), c(0), c(4)]);
        assert_eq!(b.charpoly(&f).coeffs(), &[c(-4), c(9), c(-6), c(1)]);
    }

    #[test]
    fn span_builder_tracks_dimension() {
        let f = PrimeField::default();
        let mut s = SpanBuilder::new(3);
        assert!(s.insert(&f, &[1, 2, 3]));
        assert!(s.insert(&f, &[0, 1, 1]));
        assert!(!s.insert(&f, &[1, 4, 5]));
        assert!(s.contains(&f, &[2, 5, 7]));
        assert_eq!(s.dim(), 2);
    }
}
