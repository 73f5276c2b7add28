//! Hyperbolic (Anosov) automorphisms of the torus as 2x2 integer matrices:
//! the Anosov test, dilatation, Lefschetz fixed-point counts and their exact
//! enumeration, minimal powers fixing two points, factorization into the two
//! elementary shear generators, and trace tables for power-independence
//! certificates.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::abgroup::{smith_normal_form, IntMatrix};
use crate::error::{Error, Result};

/// An orientation-preserving automorphism of the torus: a 2x2 integer matrix
/// of determinant exactly 1. Determinant -1 input is rejected, not coerced.
#[derive(Clone, PartialEq, Eq)]
pub struct TorusMap {
    matrix: IntMatrix,
}

impl TorusMap {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if (matrix.rows(), matrix.cols()) != (2, 2) {
            return Err(Error::Dimension("torus maps are 2x2".into()));
        }
        let det = matrix.det();
        if !det.is_one() {
            return Err(Error::DeterminantNotOne(det.to_string()));
        }
        Ok(TorusMap { matrix })
    }

    /// Row-major convenience constructor.
    pub fn from_entries(entries: [i64; 4]) -> Result<Self> {
        Self::new(IntMatrix::from_i64(2, 2, &entries))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> BigInt {
        self.matrix.get(0, 0) + self.matrix.get(1, 1)
    }

    /// Hyperbolicity test: |trace| > 2.
    pub fn is_anosov(&self) -> bool {
        self.trace().abs() > BigInt::from(2)
    }

    pub fn pow(&self, k: u64) -> IntMatrix {
        self.matrix.pow(k)
    }
}

impl fmt::Debug for TorusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusMap{}", self.matrix)
    }
}

impl fmt::Display for TorusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.matrix)
    }
}

/// The stretch factor of an Anosov map together with the exact integer data
/// (trace and discriminant) that determines it.
#[derive(Clone, Debug, PartialEq)]
pub struct Dilatation {
    pub value: f64,
    pub trace: BigInt,
    pub discriminant: BigInt,
}

/// (|t| + sqrt(t^2 - 4)) / 2 for an Anosov map of trace t, with the exact
/// pair (t, t^2 - 4) returned alongside for exact comparisons.
pub fn dilatation(map: &TorusMap) -> Result<Dilatation> {
    if !map.is_anosov() {
        return Err(Error::NotAnosov(map.trace().to_string()));
    }
    let trace = map.trace();
    let discriminant = &trace * &trace - BigInt::from(4);
    let t = trace
        .abs()
        .to_f64()
        .ok_or(Error::Overflow("trace to f64"))?;
    let value = (t + (t * t - 4.0).sqrt()) / 2.0;
    Ok(Dilatation {
        value,
        trace,
        discriminant,
    })
}

/// |det(M^k - I)|: the Lefschetz count of fixed points of the k-th power.
/// For a hyperbolic map all fixed points are nondegenerate and this is the
/// exact cardinality of the fixed set. The identity power is rejected; a
/// degenerate non-identity power (eigenvalue 1) yields 0.
pub fn fixed_point_count(map: &TorusMap, k: u64) -> Result<BigUint> {
    let mk = map.pow(k);
    if mk.is_identity() {
        return Err(Error::IdentityPower);
    }
    let delta = &mk - &IntMatrix::identity(2);
    Ok(delta
        .det()
        .abs()
        .to_biguint()
        .expect("absolute value is nonnegative"))
}

/// A point of the torus with rational coordinates in [0, 1).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TorusPoint {
    pub x: BigRational,
    pub y: BigRational,
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

fn fract(r: BigRational) -> BigRational {
    &r - r.floor()
}

/// All solutions of (M^k - I) x = 0 modulo Z^2, enumerated exactly through
/// the Smith normal form of M^k - I and returned sorted. The origin is
/// always fixed. Errors if the fixed set is infinite (det(M^k - I) = 0).
pub fn fixed_points(map: &TorusMap, k: u64) -> Result<Vec<TorusPoint>> {
    let mk = map.pow(k);
    if mk.is_identity() {
        return Err(Error::IdentityPower);
    }
    let delta = &mk - &IntMatrix::identity(2);
    let snf = smith_normal_form(&delta);
    let d1 = snf.d.get(0, 0).clone();
    let d2 = snf.d.get(1, 1).clone();
    if d1.is_zero() || d2.is_zero() {
        return Err(Error::DegenerateFixedSet);
    }
    // With U (M^k - I) V = D, the solutions are x = V y mod Z^2 where
    // y ranges over (j1/d1, j2/d2).
    let mut points = Vec::new();
    let mut j1 = BigInt::zero();
    while j1 < d1 {
        let mut j2 = BigInt::zero();
        while j2 < d2 {
            let y1 = BigRational::new(j1.clone(), d1.clone());
            let y2 = BigRational::new(j2.clone(), d2.clone());
            let x = fract(
                BigRational::from(snf.v.get(0, 0).clone()) * &y1
                    + BigRational::from(snf.v.get(0, 1).clone()) * &y2,
            );
            let y = fract(
                BigRational::from(snf.v.get(1, 0).clone()) * &y1
                    + BigRational::from(snf.v.get(1, 1).clone()) * &y2,
            );
            points.push(TorusPoint { x, y });
            j2 += 1;
        }
        j1 += 1;
    }
    points.sort();
    points.dedup();
    Ok(points)
}

/// The least k >= 1 whose power fixes at least two points. Always terminates
/// on Anosov input since the counts grow with the dilatation.
pub fn min_power_two_fixed(map: &TorusMap) -> Result<u64> {
    if !map.is_anosov() {
        return Err(Error::NotAnosov(map.trace().to_string()));
    }
    let two = BigUint::from(2u32);
    let mut k = 1u64;
    loop {
        if fixed_point_count(map, k)? >= two {
            return Ok(k);
        }
        k += 1;
    }
}

/// One of the two elementary shears or their inverses.
///
/// R = [[1,1],[0,1]] and L = [[1,0],[1,1]] generate the determinant-one
/// 2x2 integer matrices together with -I.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistLetter {
    R,
    RInv,
    L,
    LInv,
}

impl TwistLetter {
    pub fn matrix(self) -> IntMatrix {
        match self {
            TwistLetter::R => IntMatrix::from_i64(2, 2, &[1, 1, 0, 1]),
            TwistLetter::RInv => IntMatrix::from_i64(2, 2, &[1, -1, 0, 1]),
            TwistLetter::L => IntMatrix::from_i64(2, 2, &[1, 0, 1, 1]),
            TwistLetter::LInv => IntMatrix::from_i64(2, 2, &[1, 0, -1, 1]),
        }
    }

    pub fn inverse(self) -> TwistLetter {
        match self {
            TwistLetter::R => TwistLetter::RInv,
            TwistLetter::RInv => TwistLetter::R,
            TwistLetter::L => TwistLetter::LInv,
            TwistLetter::LInv => TwistLetter::L,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TwistLetter::R => "R",
            TwistLetter::RInv => "R^-1",
            TwistLetter::L => "L",
            TwistLetter::LInv => "L^-1",
        }
    }
}

/// A word in the shear generators together with a global sign for a possible
/// -I factor. The product of the letters times sign * I reproduces the
/// source matrix exactly; this invariant is established by
/// [`factor_into_twists`] and preserved by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistWord {
    letters: Vec<TwistLetter>,
    sign: i8,
}

impl TwistWord {
    pub fn letters(&self) -> &[TwistLetter] {
        &self.letters
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Product of the letters alone, without the sign.
    pub fn letter_product(&self) -> IntMatrix {
        self.letters
            .iter()
            .fold(IntMatrix::identity(2), |acc, l| &acc * &l.matrix())
    }

    /// Product of the letters times sign * I: equals the factored matrix.
    pub fn evaluate(&self) -> IntMatrix {
        let p = self.letter_product();
        if self.sign < 0 {
            -&p
        } else {
            p
        }
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let labels: Vec<&str> = self.letters.iter().map(|l| l.label()).collect();
        write!(f, "{}", labels.join("."))
    }
}

const MAX_WORD_LETTERS: usize = 1_000_000;

fn push_run(out: &mut Vec<TwistLetter>, letter: TwistLetter, count: &BigInt) -> Result<()> {
    let count = count
        .to_usize()
        .filter(|&c| c <= MAX_WORD_LETTERS)
        .ok_or(Error::Overflow("twist word length"))?;
    if out.len() + count > MAX_WORD_LETTERS {
        return Err(Error::Overflow("twist word length"));
    }
    out.extend(std::iter::repeat_n(letter, count));
    Ok(())
}

/// Factors a determinant-one matrix into shear letters by the Euclidean
/// algorithm on the first column, with a deterministic quotient rule. When a
/// division is exact with quotient of absolute value at least two, the
/// quotient is shortened by one so the remainder stays nonzero; this keeps
/// the reduction inside the generic loop and, on nonnegative matrices,
/// recovers the positive word. The rare terminal shapes are handled
/// explicitly: an upper-triangular result is a power of R up to sign, and a
/// zero upper-left entry is sign * L^j * R^-1 L R^-1.
pub fn factor_into_twists(map: &TorusMap) -> Result<TwistWord> {
    let mut n = map.matrix().clone();
    let mut letters: Vec<TwistLetter> = Vec::new();

    loop {
        let a = n.get(0, 0).clone();
        let c = n.get(1, 0).clone();

        if c.is_zero() {
            // n = [[e, b], [0, e]] with e = ±1 and n = ±R^(±b)
            let e = n.get(0, 0).clone();
            let b = n.get(0, 1).clone();
            let (sign, exponent) = if e.is_one() { (1i8, b) } else { (-1i8, -b) };
            if exponent.is_positive() {
                push_run(&mut letters, TwistLetter::R, &exponent)?;
            } else {
                push_run(&mut letters, TwistLetter::RInv, &(-exponent))?;
            }
            return Ok(TwistWord { letters, sign });
        }

        if a.is_zero() {
            // n = [[0, -e], [e, d]] = ±(L^(e*d) applied inversely) * S with
            // S = R^-1 L R^-1; concretely n = L^(-e*d) * e * S.
            let e = c.clone(); // determinant forces c = ±1 here
            debug_assert!(e.abs().is_one());
            let d = n.get(1, 1).clone();
            let exponent = -(&e * &d);
            if exponent.is_positive() {
                push_run(&mut letters, TwistLetter::L, &exponent)?;
            } else {
                push_run(&mut letters, TwistLetter::LInv, &(-exponent))?;
            }
            letters.extend([TwistLetter::RInv, TwistLetter::L, TwistLetter::RInv]);
            let sign = if e.is_one() { 1 } else { -1 };
            return Ok(TwistWord { letters, sign });
        }

        // reduce the entry of larger absolute value by the other
        if a.abs() > c.abs() {
            let mut q = &a / &c;
            if (&a % &c).is_zero() && q.abs() > BigInt::one() {
                q -= q.signum();
            }
            // peel R^q from the left: n <- R^(-q) n
            if q.is_positive() {
                push_run(&mut letters, TwistLetter::R, &q)?;
            } else {
                push_run(&mut letters, TwistLetter::RInv, &(-&q))?;
            }
            n.row_addmul(0, 1, &(-q));
        } else {
            let mut q = &c / &a;
            if (&c % &a).is_zero() && q.abs() > BigInt::one() {
                q -= q.signum();
            }
            if q.is_positive() {
                push_run(&mut letters, TwistLetter::L, &q)?;
            } else {
                push_run(&mut letters, TwistLetter::LInv, &(-&q))?;
            }
            n.row_addmul(1, 0, &(-q));
        }
    }
}

/// Exact traces of M, M^2, ..., M^K through the determinant-one recurrence
/// t_{k+1} = t_1 t_k - t_{k-1} with t_0 = 2.
pub fn trace_table(map: &TorusMap, k_max: u64) -> Vec<BigInt> {
    let t1 = map.trace();
    let mut out = Vec::with_capacity(k_max as usize);
    let mut prev = BigInt::from(2);
    let mut cur = t1.clone();
    for _ in 0..k_max {
        out.push(cur.clone());
        let next = &t1 * &cur - &prev;
        prev = cur;
        cur = next;
    }
    out
}

/// A one-sided certificate of power independence: if the trace tables of two
/// Anosov maps up to K are disjoint as sets, then no power of one is
/// conjugate to a power of the other within that range (conjugate matrices
/// share traces). `true` is a genuine certificate; `false` only means the
/// test is inconclusive and is reported as such by callers.
pub fn power_independent_up_to(m1: &TorusMap, m2: &TorusMap, k_max: u64) -> Result<bool> {
    if !m1.is_anosov() {
        return Err(Error::NotAnosov(m1.trace().to_string()));
    }
    if !m2.is_anosov() {
        return Err(Error::NotAnosov(m2.trace().to_string()));
    }
    let t1: std::collections::BTreeSet<BigInt> = trace_table(m1, k_max).into_iter().collect();
    let t2: std::collections::BTreeSet<BigInt> = trace_table(m2, k_max).into_iter().collect();
    Ok(t1.is_disjoint(&t2))
}
