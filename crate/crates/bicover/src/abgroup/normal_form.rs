//! Smith and Hermite normal forms over the integers.
//!
//! Both forms are computed by explicit unimodular row/column operations so
//! that the transforms can be returned alongside the normal form. The pivot
//! rules are fixed (smallest nonzero absolute value, ties broken row-major)
//! to keep outputs deterministic across runs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// U * M * V = D with U, V unimodular and D diagonal satisfying the
/// divisibility chain d1 | d2 | ... (diagonal entries nonnegative, zeros
/// trailing).
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        let n = self.d.rows().min(self.d.cols());
        (0..n).filter(|&i| !self.d.get(i, i).is_zero()).count()
    }

    /// The nonzero diagonal entries d1 | d2 | ...
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n)
            .map(|i| self.d.get(i, i).clone())
            .filter(|e| !e.is_zero())
            .collect()
    }
}

fn pivot_position(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let e = d.get(i, j);
            if e.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if d.get(bi, bj).abs() <= e.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Bézout data normalized so that g >= 0 and g = s*a + t*b.
fn bezout(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = pivot_position(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        'reduce: loop {
            // Clear column t. When the pivot does not divide an entry,
            // replace it by the gcd with a unimodular row combination.
            for i in (0..rows).filter(|&i| i != t) {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let p = d.get(t, t).clone();
                let x = d.get(i, t).clone();
                if (&x % &p).is_zero() {
                    let q = -(&x / &p);
                    d.row_addmul(i, t, &q);
                    u.row_addmul(i, t, &q);
                } else {
                    let (g, s, w) = bezout(&p, &x);
                    let a = &p / &g;
                    let b = &x / &g;
                    // [s w; -b a] has determinant s*a + w*b = 1
                    d.row_combine(t, i, &s, &w, &(-&b), &a);
                    u.row_combine(t, i, &s, &w, &(-&b), &a);
                    continue 'reduce;
                }
            }
            // Clear row t by column operations; these leave column t intact
            // except when a gcd combination is needed, in which case restart.
            for j in (0..cols).filter(|&j| j != t) {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let p = d.get(t, t).clone();
                let x = d.get(t, j).clone();
                if (&x % &p).is_zero() {
                    let q = -(&x / &p);
                    d.col_addmul(j, t, &q);
                    v.col_addmul(j, t, &q);
                } else {
                    let (g, s, w) = bezout(&p, &x);
                    let a = &p / &g;
                    let b = &x / &g;
                    d.col_combine(t, j, &s, &w, &(-&b), &a);
                    v.col_combine(t, j, &s, &w, &(-&b), &a);
                    continue 'reduce;
                }
            }
            // The pivot must divide every remaining entry for the chain to
            // hold; fold an offending column into column t and retry.
            let p = d.get(t, t).clone();
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(d.get(i, j) % &p).is_zero() {
                        offender = Some(j);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(j) => {
                    let one = BigInt::from(1);
                    d.col_addmul(t, j, &one);
                    v.col_addmul(t, j, &one);
                    continue 'reduce;
                }
                None => break,
            }
        }
        t += 1;
    }

    for i in 0..rows.min(cols) {
        if d.get(i, i).is_negative() {
            d.negate_row(i);
            u.negate_row(i);
        }
    }

    SmithDecomposition { u, d, v }
}

/// Row-style Hermite normal form: the canonical echelon basis of the row
/// lattice. Pivots are positive, entries above a pivot lie in [0, pivot),
/// zero rows are dropped.
pub fn row_hnf(m: &IntMatrix) -> IntMatrix {
    let mut h = m.clone();
    let (rows, cols) = (h.rows(), h.cols());
    let mut r = 0;
    for j in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let mut min_row = None;
            for i in r..rows {
                if h.get(i, j).is_zero() {
                    continue;
                }
                match min_row {
                    Some(k) if h.get(k, j).abs() <= h.get(i, j).abs() => {}
                    _ => min_row = Some(i),
                }
            }
            let Some(imin) = min_row else {
                break;
            };
            h.swap_rows(r, imin);
            let mut reduced_all = true;
            for i in r + 1..rows {
                if h.get(i, j).is_zero() {
                    continue;
                }
                let q = -(h.get(i, j) / h.get(r, j));
                if !q.is_zero() {
                    h.row_addmul(i, r, &q);
                }
                if !h.get(i, j).is_zero() {
                    reduced_all = false;
                }
            }
            if reduced_all {
                break;
            }
        }
        if !h.get(r, j).is_zero() {
            if h.get(r, j).is_negative() {
                h.negate_row(r);
            }
            let p = h.get(r, j).clone();
            for i in 0..r {
                let q = -h.get(i, j).div_floor(&p);
                if !q.is_zero() {
                    h.row_addmul(i, r, &q);
                }
            }
            r += 1;
        }
    }
    h.take_rows(r)
}

/// Column-style Hermite normal form: the canonical basis of the column
/// lattice of `m`. Two matrices span the same column lattice if and only if
/// their forms are identical. Zero columns are dropped, so the zero matrix
/// maps to a `rows x 0` representative.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    row_hnf(&m.transpose()).transpose()
}

/// A basis of the integer kernel {v : M v = 0}, returned as the columns of a
/// `cols(m) x nullity` matrix.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    IntMatrix::from_fn(m.cols(), m.cols() - rank, |i, j| {
        snf.v.get(i, rank + j).clone()
    })
}
