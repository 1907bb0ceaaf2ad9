//! The standard three-eigenvalue braid matrix on the vector representation.

use super::tensor::TwoLegOp;
use crate::arith::{Field, Series};

/// Twice the exponent ladder entry for the 1-based index `i`.
fn rho2(series: Series, n: usize, i: usize) -> i64 {
    let ip = n + 1 - i;
    if i == ip {
        0
    } else if i < ip {
        match series {
            Series::So => n as i64 - 2 * i as i64,
            Series::Sp => n as i64 + 2 - 2 * i as i64,
        }
    } else {
        -rho2(series, n, ip)
    }
}

fn sign(series: Series, n: usize, i: usize) -> i64 {
    match series {
        Series::So => 1,
        Series::Sp if i <= n / 2 => 1,
        Series::Sp => -1,
    }
}

/// `P·R` for the vector-representation solution, with `qh = q^{1/2}`.
pub fn frt_braid<F: Field>(f: &F, series: Series, n: usize, qh: &F::Elem) -> TwoLegOp<F::Elem> {
    let q = f.mul(qh, qh);
    let q_inv = f.inv(&q).expect("q is nonzero");
    let d = f.sub(&q, &q_inv);
    let idx = |a: usize, b: usize| (a - 1) * n + (b - 1);
    // entry of R for e_ij ⊗ e_kl sits at row (i,k), column (j,l); P swaps the row legs
    let mut entries = Vec::new();
    let mut push = |i: usize, j: usize, k: usize, l: usize, v: F::Elem| {
        let row = idx(k, i);
        entries.push((row, idx(j, l), v));
    };
    for i in 1..=n {
        let ip = n + 1 - i;
        for j in 1..=n {
            if i == j && i != ip {
                push(i, i, j, j, q.clone());
            } else if i != j && i != n + 1 - j {
                push(i, i, j, j, f.one());
            } else if j == ip && i != ip {
                push(i, i, j, j, q_inv.clone());
            } else if i == j && i == ip {
                push(i, i, i, i, f.one());
            }
        }
    }
    for i in 1..=n {
        for j in 1..i {
            push(i, j, j, i, d.clone());
            let e = rho2(series, n, i) - rho2(series, n, j);
            let mut c = f.mul(&d, &f.pow(qh, e).expect("qh is nonzero"));
            if sign(series, n, i) * sign(series, n, j) < 0 {
                c = f.neg(&c);
            }
            push(i, j, n + 1 - i, n + 1 - j, f.neg(&c));
        }
    }
    TwoLegOp::from_entries(f, n, entries)
}
