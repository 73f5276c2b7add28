//! Prime-support arithmetic: the admissibility predicate on pairs of
//! integers, exhaustive enumeration of admissible splittings, and the
//! one-parameter families with many splittings over a single pair.

use std::fmt;

use crate::error::{Error, Result};

/// Deterministic primality test by trial division. Instances in this toolkit
/// are desk-scale, so nothing faster is warranted.
pub fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    if x.is_multiple_of(2) {
        return x == 2;
    }
    if x.is_multiple_of(3) {
        return x == 3;
    }
    let mut d = 5u64;
    while d <= x / d {
        if x.is_multiple_of(d) || x.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// A strictly sorted set of distinct primes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PrimeSet {
    primes: Vec<u64>,
}

impl PrimeSet {
    pub fn empty() -> Self {
        PrimeSet::default()
    }

    /// Sorts, deduplicates and validates primality of every element.
    pub fn new(primes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut primes: Vec<u64> = primes.into_iter().collect();
        primes.sort_unstable();
        primes.dedup();
        for &p in &primes {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
        }
        Ok(PrimeSet { primes })
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().copied()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.binary_search(&p).is_ok()
    }

    pub fn is_disjoint(&self, other: &PrimeSet) -> bool {
        self.iter().all(|p| !other.contains(p))
    }

    pub fn is_subset(&self, other: &PrimeSet) -> bool {
        self.iter().all(|p| other.contains(p))
    }

    pub fn union(&self, other: &PrimeSet) -> PrimeSet {
        let mut primes: Vec<u64> = self.primes.iter().chain(&other.primes).copied().collect();
        primes.sort_unstable();
        primes.dedup();
        PrimeSet { primes }
    }

    pub fn intersection(&self, other: &PrimeSet) -> PrimeSet {
        PrimeSet {
            primes: self.iter().filter(|&p| other.contains(p)).collect(),
        }
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.primes.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The set of primes dividing n. Rejects 0; the support of 1 is empty.
pub fn prime_support(n: u64) -> Result<PrimeSet> {
    if n == 0 {
        return Err(Error::ZeroValue);
    }
    let mut primes = Vec::new();
    let mut rest = n;
    let mut d = 2u64;
    while d <= rest / d {
        if rest.is_multiple_of(d) {
            primes.push(d);
            while rest.is_multiple_of(d) {
                rest /= d;
            }
        }
        d += 1;
    }
    if rest > 1 {
        primes.push(rest);
    }
    Ok(PrimeSet { primes })
}

/// The P-part of n: the largest divisor of n whose prime support lies in P.
pub fn p_part(n: u64, p_set: &PrimeSet) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroValue);
    }
    let mut part = 1u64;
    for p in p_set.iter() {
        let mut rest = n;
        while rest.is_multiple_of(p) {
            rest /= p;
            part *= p;
        }
    }
    Ok(part)
}

/// Why a candidate (n, m, A, B) fails the admissibility conditions. The
/// variants follow the order in which the conditions are checked, so the
/// first failing clause is reported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    /// n or m is below 2.
    BelowMinimum { n: u64, m: u64 },
    /// A and B share a prime.
    SetsNotDisjoint { shared: u64 },
    /// A and B are both empty.
    SetsBothEmpty,
    /// A prime of A ∪ B does not divide both n and m.
    SupportNotCommon { prime: u64 },
    /// n_A * m_B is not divisible by m_A * n_B.
    RatioNotIntegral { numerator: u64, denominator: u64 },
    /// The ratio is 1.
    RatioNotGreaterThanOne,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::BelowMinimum { n, m } => {
                write!(f, "n and m must both be at least 2 (got n={n}, m={m})")
            }
            Rejection::SetsNotDisjoint { shared } => {
                write!(f, "A and B must be disjoint; both contain {shared}")
            }
            Rejection::SetsBothEmpty => write!(f, "A and B must not both be empty"),
            Rejection::SupportNotCommon { prime } => {
                write!(f, "{prime} does not divide both n and m")
            }
            Rejection::RatioNotIntegral {
                numerator,
                denominator,
            } => write!(
                f,
                "n_A*m_B / (m_A*n_B) = {numerator}/{denominator} is not an integer"
            ),
            Rejection::RatioNotGreaterThanOne => {
                write!(f, "n_A*m_B / (m_A*n_B) must be strictly greater than 1")
            }
        }
    }
}

/// An admissible splitting: the pair (n, m) together with disjoint prime
/// sets A, B and all derived prime-part data. Constructed only through
/// [`check_admissible`], so the invariants hold for every value of this type.
#[derive(Clone, PartialEq, Eq)]
pub struct AdmissiblePair {
    n: u64,
    m: u64,
    a_set: PrimeSet,
    b_set: PrimeSet,
    c_set: PrimeSet,
    d_set: PrimeSet,
    n_a: u64,
    n_b: u64,
    n_c: u64,
    m_a: u64,
    m_b: u64,
    m_d: u64,
    ratio: u64,
}

impl AdmissiblePair {
    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn m(&self) -> u64 {
        self.m
    }
    pub fn a_set(&self) -> &PrimeSet {
        &self.a_set
    }
    pub fn b_set(&self) -> &PrimeSet {
        &self.b_set
    }
    /// Primes of n outside A ∪ B.
    pub fn c_set(&self) -> &PrimeSet {
        &self.c_set
    }
    /// Primes of m outside A ∪ B.
    pub fn d_set(&self) -> &PrimeSet {
        &self.d_set
    }
    pub fn n_a(&self) -> u64 {
        self.n_a
    }
    pub fn n_b(&self) -> u64 {
        self.n_b
    }
    pub fn n_c(&self) -> u64 {
        self.n_c
    }
    pub fn m_a(&self) -> u64 {
        self.m_a
    }
    pub fn m_b(&self) -> u64 {
        self.m_b
    }
    pub fn m_d(&self) -> u64 {
        self.m_d
    }
    /// n_A*m_B / (m_A*n_B), an integer strictly greater than 1.
    pub fn ratio(&self) -> u64 {
        self.ratio
    }
    /// The order n_B * m_A shared by both quotients downstream.
    pub fn quotient_order(&self) -> u64 {
        self.n_b * self.m_a
    }
}

impl fmt::Debug for AdmissiblePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AdmissiblePair(n={}, m={}, A={}, B={})",
            self.n, self.m, self.a_set, self.b_set
        )
    }
}

/// Decides admissibility of (n, m) with respect to (A, B). On success every
/// derived field of [`AdmissiblePair`] is populated; on failure the report
/// names the first failing clause, in the order the conditions are stated.
pub fn check_admissible(
    n: u64,
    m: u64,
    a_set: &PrimeSet,
    b_set: &PrimeSet,
) -> std::result::Result<AdmissiblePair, Rejection> {
    if n < 2 || m < 2 {
        return Err(Rejection::BelowMinimum { n, m });
    }
    if let Some(shared) = a_set.iter().find(|&p| b_set.contains(p)) {
        return Err(Rejection::SetsNotDisjoint { shared });
    }
    if a_set.is_empty() && b_set.is_empty() {
        return Err(Rejection::SetsBothEmpty);
    }
    let support_n = prime_support(n).expect("n >= 2");
    let support_m = prime_support(m).expect("m >= 2");
    let common = support_n.intersection(&support_m);
    let ab = a_set.union(b_set);
    if let Some(prime) = ab.iter().find(|&p| !common.contains(p)) {
        return Err(Rejection::SupportNotCommon { prime });
    }

    let n_a = p_part(n, a_set).expect("n >= 2");
    let n_b = p_part(n, b_set).expect("n >= 2");
    let m_a = p_part(m, a_set).expect("m >= 2");
    let m_b = p_part(m, b_set).expect("m >= 2");
    let numerator = (n_a as u128) * (m_b as u128);
    let denominator = (m_a as u128) * (n_b as u128);
    if !numerator.is_multiple_of(denominator) {
        return Err(Rejection::RatioNotIntegral {
            numerator: n_a.saturating_mul(m_b),
            denominator: m_a.saturating_mul(n_b),
        });
    }
    let ratio = numerator / denominator;
    if ratio <= 1 {
        return Err(Rejection::RatioNotGreaterThanOne);
    }

    let c_set = PrimeSet {
        primes: support_n.iter().filter(|&p| !ab.contains(p)).collect(),
    };
    let d_set = PrimeSet {
        primes: support_m.iter().filter(|&p| !ab.contains(p)).collect(),
    };
    let n_c = n / (n_a * n_b);
    let m_d = m / (m_a * m_b);

    Ok(AdmissiblePair {
        n,
        m,
        a_set: a_set.clone(),
        b_set: b_set.clone(),
        c_set,
        d_set,
        n_a,
        n_b,
        n_c,
        m_a,
        m_b,
        m_d,
        ratio: ratio as u64,
    })
}

/// All admissible splittings of (n, m), enumerated over every disjoint pair
/// (A, B) of subsets of the common prime support, in lexicographic order on
/// the sorted prime lists of (A, B). The empty list is a valid result.
pub fn enumerate_admissible(n: u64, m: u64) -> Vec<AdmissiblePair> {
    if n < 2 || m < 2 {
        return Vec::new();
    }
    let common = prime_support(n)
        .expect("n >= 2")
        .intersection(&prime_support(m).expect("m >= 2"));
    let primes = common.as_slice();
    let k = primes.len();

    // Each common prime is assigned to A, to B, or to neither: 3^k candidates.
    let mut candidates = Vec::new();
    let total = 3usize.pow(k as u32);
    for code in 0..total {
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut rest = code;
        for &p in primes {
            match rest % 3 {
                1 => a.push(p),
                2 => b.push(p),
                _ => {}
            }
            rest /= 3;
        }
        candidates.push((a, b));
    }
    candidates.sort();

    candidates
        .into_iter()
        .filter_map(|(a, b)| {
            let a_set = PrimeSet { primes: a };
            let b_set = PrimeSet { primes: b };
            check_admissible(n, m, &a_set, &b_set).ok()
        })
        .collect()
}

/// A pair (n, m) that is admissible with respect to k different splittings:
/// n is the product of the squares of the chosen primes and m the product of
/// the primes themselves, with one splitting ({p}, ∅) per prime.
#[derive(Clone, Debug)]
pub struct KChoiceFamily {
    pub n: u64,
    pub m: u64,
    pub splittings: Vec<AdmissiblePair>,
}

pub fn k_choice_family(primes: &PrimeSet) -> Result<KChoiceFamily> {
    if primes.is_empty() {
        return Err(Error::EmptyPrimeFamily);
    }
    let mut n: u64 = 1;
    let mut m: u64 = 1;
    for p in primes.iter() {
        m = m
            .checked_mul(p)
            .ok_or(Error::Overflow("k-choice family m"))?;
        n = n
            .checked_mul(p)
            .and_then(|v| v.checked_mul(p))
            .ok_or(Error::Overflow("k-choice family n"))?;
    }
    let splittings = primes
        .iter()
        .map(|p| {
            let a = PrimeSet { primes: vec![p] };
            check_admissible(n, m, &a, &PrimeSet::empty())
                .map_err(|r| Error::Internal(format!("family splitting for {p} rejected: {r}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KChoiceFamily { n, m, splittings })
}
