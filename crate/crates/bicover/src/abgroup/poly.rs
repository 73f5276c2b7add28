//! Integer characteristic polynomials and exact polynomial division, used to
//! verify that a lifted map restricts to its source on the invariant plane.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;

/// Coefficients of the characteristic polynomial det(xI - M), leading
/// coefficient first: [1, c1, ..., cn]. Computed by the Faddeev-LeVerrier
/// recurrence, whose divisions are exact over the integers.
pub fn char_poly(m: &IntMatrix) -> Vec<BigInt> {
    assert!(
        m.is_square(),
        "characteristic polynomial needs a square matrix"
    );
    let n = m.rows();
    let mut coeffs = vec![BigInt::one()];
    let mut aux = m.clone();
    for k in 1..=n {
        let tr: BigInt = (0..n).map(|i| aux.get(i, i).clone()).sum();
        let (c, r) = (-tr).div_rem(&BigInt::from(k as i64));
        debug_assert!(r.is_zero(), "Faddeev-LeVerrier division must be exact");
        coeffs.push(c.clone());
        if k < n {
            let mut shifted = aux;
            for i in 0..n {
                let v = shifted.get(i, i) + &c;
                shifted.set(i, i, v);
            }
            aux = m * &shifted;
        }
    }
    coeffs
}

/// Whether the monic polynomial `divisor` divides `dividend` exactly over the
/// integers. Coefficients are leading-first. Panics if `divisor` is not monic.
pub fn divides_monic(divisor: &[BigInt], dividend: &[BigInt]) -> bool {
    assert!(
        divisor.first().map(|c| c.is_one()).unwrap_or(false),
        "divisor must be monic"
    );
    if dividend.len() < divisor.len() {
        return dividend.iter().all(|c| c.is_zero());
    }
    let mut rem: Vec<BigInt> = dividend.to_vec();
    let deg_diff = dividend.len() - divisor.len();
    for shift in 0..=deg_diff {
        let q = rem[shift].clone();
        if q.is_zero() {
            continue;
        }
        for (i, d) in divisor.iter().enumerate() {
            rem[shift + i] = &rem[shift + i] - &(&q * d);
        }
    }
    rem.iter().all(|c| c.is_zero())
}
