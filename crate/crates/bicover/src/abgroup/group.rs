//! Finite abelian groups in invariant-factor form, and subgroup/quotient
//! computations driven by the Smith normal form.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::normal_form::{hermite_normal_form, smith_normal_form};
use crate::error::{Error, Result};

/// A finite abelian group in canonical form: the invariant factors
/// d1 | d2 | ... | dk with every d_i >= 2. The trivial group has an empty
/// chain. Two groups are isomorphic exactly when their chains are equal,
/// which is what `PartialEq` compares.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<BigUint>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup {
            invariant_factors: Vec::new(),
        }
    }

    /// Builds a group from a chain that is already in invariant-factor form.
    pub fn from_invariant_factors(factors: Vec<BigUint>) -> Result<Self> {
        for w in factors.windows(2) {
            if !(&w[1] % &w[0]).is_zero() {
                return Err(Error::Internal(format!(
                    "invariant factors must form a divisibility chain; {} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        if factors.iter().any(|d| *d < BigUint::from(2u32)) {
            return Err(Error::Internal(
                "invariant factors must be at least 2".into(),
            ));
        }
        Ok(FiniteAbelianGroup {
            invariant_factors: factors,
        })
    }

    /// Canonical form of Z/o1 x Z/o2 x ... computed through the Smith normal
    /// form of the diagonal relation matrix. Factors equal to 1 are allowed
    /// and contribute nothing.
    pub fn from_cyclic_product(orders: &[u64]) -> Self {
        let entries: Vec<BigInt> = orders.iter().map(|&o| BigInt::from(o)).collect();
        Self::from_relation_diagonal(&entries)
    }

    /// Same as [`from_cyclic_product`](Self::from_cyclic_product) for
    /// arbitrary-precision orders.
    pub fn from_cyclic_product_big(orders: &[BigUint]) -> Self {
        let entries: Vec<BigInt> = orders.iter().map(|o| BigInt::from(o.clone())).collect();
        Self::from_relation_diagonal(&entries)
    }

    fn from_relation_diagonal(entries: &[BigInt]) -> Self {
        let snf = smith_normal_form(&IntMatrix::diagonal(entries));
        let factors = snf
            .diagonal()
            .into_iter()
            .map(|d| d.to_biguint().expect("SNF diagonal is nonnegative"))
            .filter(|d| !d.is_one())
            .collect();
        FiniteAbelianGroup {
            invariant_factors: factors,
        }
    }

    pub fn invariant_factors(&self) -> &[BigUint] {
        &self.invariant_factors
    }

    pub fn order(&self) -> BigUint {
        self.invariant_factors
            .iter()
            .fold(BigUint::one(), |acc, d| acc * d)
    }

    /// The exponent of the group: the last invariant factor, or 1 for the
    /// trivial group.
    pub fn exponent(&self) -> BigUint {
        self.invariant_factors
            .last()
            .cloned()
            .unwrap_or_else(BigUint::one)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.len() <= 1
    }

    /// Whether the Sylow p-subgroup is cyclic, i.e. at most one invariant
    /// factor is divisible by p. The chain ordering makes this a divisibility
    /// test on the second-to-last factor.
    pub fn sylow_is_cyclic(&self, p: u64) -> bool {
        let p = BigUint::from(p);
        self.invariant_factors
            .iter()
            .filter(|d| (*d % &p).is_zero())
            .count()
            <= 1
    }

    /// The primary decomposition as a list of cyclic prime-power orders,
    /// sorted ascending. Factorization is by trial division, which is fine
    /// for the group orders this toolkit manipulates.
    pub fn primary_decomposition(&self) -> Vec<BigUint> {
        let mut parts: Vec<BigUint> = Vec::new();
        for d in &self.invariant_factors {
            let mut rest = d.clone();
            let mut p = BigUint::from(2u32);
            while &p * &p <= rest {
                if (&rest % &p).is_zero() {
                    let mut q = BigUint::one();
                    while (&rest % &p).is_zero() {
                        rest /= &p;
                        q *= &p;
                    }
                    parts.push(q);
                }
                p += 1u32;
            }
            if rest > BigUint::one() {
                parts.push(rest);
            }
        }
        parts.sort();
        parts
    }
}

/// True precisely when the canonical chains coincide.
pub fn are_isomorphic(g: &FiniteAbelianGroup, h: &FiniteAbelianGroup) -> bool {
    g == h
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        write!(f, "{}", s.join(" x "))
    }
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A subgroup of Z/o1 x ... x Z/ok given by a list of generators with
/// coordinates reduced modulo the ambient orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupPresentation {
    ambient: Vec<u64>,
    generators: Vec<Vec<u64>>,
}

impl SubgroupPresentation {
    pub fn new(ambient: Vec<u64>, generators: Vec<Vec<u64>>) -> Result<Self> {
        if ambient.contains(&0) {
            return Err(Error::ZeroValue);
        }
        let generators = generators
            .into_iter()
            .map(|g| {
                if g.len() != ambient.len() {
                    return Err(Error::Dimension(format!(
                        "generator has {} coordinates, ambient has {} factors",
                        g.len(),
                        ambient.len()
                    )));
                }
                Ok(g.iter().zip(&ambient).map(|(&x, &o)| x % o).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SubgroupPresentation {
            ambient,
            generators,
        })
    }

    /// Convenience for subgroups of Z/n x Z/m.
    pub fn in_pair(n: u64, m: u64, generators: &[(u64, u64)]) -> Result<Self> {
        Self::new(
            vec![n, m],
            generators.iter().map(|&(a, b)| vec![a, b]).collect(),
        )
    }

    pub fn ambient(&self) -> &[u64] {
        &self.ambient
    }

    pub fn generators(&self) -> &[Vec<u64>] {
        &self.generators
    }

    pub fn ambient_order(&self) -> BigUint {
        self.ambient
            .iter()
            .fold(BigUint::one(), |acc, &o| acc * BigUint::from(o))
    }

    /// Basis of the lattice L in Z^k spanned by the generators together with
    /// the relation lattice diag(ambient) Z^k. The subgroup is L / diag Z^k.
    fn lattice_basis(&self) -> IntMatrix {
        let k = self.ambient.len();
        let gens = IntMatrix::from_fn(k, self.generators.len(), |i, j| {
            BigInt::from(self.generators[j][i])
        });
        let relations = IntMatrix::diagonal(
            &self
                .ambient
                .iter()
                .map(|&o| BigInt::from(o))
                .collect::<Vec<_>>(),
        );
        hermite_normal_form(&gens.hstack(&relations))
    }

    /// The canonical structure of the generated subgroup together with its
    /// index in the ambient group.
    ///
    /// Both come out of one Hermite/Smith computation: if B is the canonical
    /// basis of the lattice L spanned by the generators and the relations,
    /// then the subgroup is coker(B^{-1} * diag(ambient)) and the index is
    /// |det B|.
    pub fn subgroup_from_generators(&self) -> (FiniteAbelianGroup, BigUint) {
        let b = self.lattice_basis();
        let index = b
            .det()
            .abs()
            .to_biguint()
            .expect("absolute value is nonnegative");
        // Solve B * X = diag(ambient); X is integral because diag lies in L.
        let k = self.ambient.len();
        let relations_in_basis = solve_exact(
            &b,
            &IntMatrix::diagonal(
                &self
                    .ambient
                    .iter()
                    .map(|&o| BigInt::from(o))
                    .collect::<Vec<_>>(),
            ),
        );
        let snf = smith_normal_form(&relations_in_basis);
        let factors = snf
            .diagonal()
            .into_iter()
            .map(|d| d.to_biguint().expect("nonnegative"))
            .filter(|d| !d.is_one())
            .collect::<Vec<_>>();
        debug_assert_eq!(snf.rank(), k, "finite-index sublattice must be full rank");
        let group = FiniteAbelianGroup {
            invariant_factors: factors,
        };
        (group, index)
    }

    /// Canonical form of (ambient group) / (generated subgroup), via the
    /// Smith normal form of the combined relation lattice.
    pub fn quotient_by_subgroup(&self) -> FiniteAbelianGroup {
        let snf = smith_normal_form(&self.lattice_basis());
        let factors = snf
            .diagonal()
            .into_iter()
            .map(|d| d.to_biguint().expect("nonnegative"))
            .filter(|d| !d.is_one())
            .collect();
        FiniteAbelianGroup {
            invariant_factors: factors,
        }
    }
}

/// Solves A * X = B exactly for nonsingular integer A via the adjugate. Used
/// for lattice bases, where the solution is guaranteed integral; panics if a
/// division is not exact (which would indicate a bug upstream).
fn solve_exact(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    // X = A^{-1} B = adj(A) B / det(A)
    let det = a.det();
    assert!(!det.is_zero(), "lattice basis must be nonsingular");
    let n = a.rows();
    let adj = IntMatrix::from_fn(n, n, |i, j| {
        let minor = IntMatrix::from_fn(n - 1, n - 1, |r, c| {
            let rr = if r < j { r } else { r + 1 };
            let cc = if c < i { c } else { c + 1 };
            a.get(rr, cc).clone()
        });
        let mut v = minor.det();
        if (i + j) % 2 == 1 {
            v = -v;
        }
        v
    });
    let num = &adj * b;
    num.map(|e| {
        let (q, r) = e.div_rem(&det);
        assert!(
            r.is_zero(),
            "non-integral solution: lattice containment violated"
        );
        q
    })
}

/// coker(M) = Z^rows / (column space of M) as a free part plus torsion.
pub fn cokernel(m: &IntMatrix) -> (usize, FiniteAbelianGroup) {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let factors = snf
        .diagonal()
        .into_iter()
        .map(|d| d.to_biguint().expect("nonnegative"))
        .filter(|d| !d.is_one())
        .collect();
    (
        m.rows() - rank,
        FiniteAbelianGroup {
            invariant_factors: factors,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn group(factors: &[u64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::from_invariant_factors(
            factors.iter().map(|&d| BigUint::from(d)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn cyclic_product_canonical_forms() {
        // coprime orders collapse by CRT
        assert_eq!(
            FiniteAbelianGroup::from_cyclic_product(&[3, 4]),
            group(&[12])
        );
        assert_eq!(
            FiniteAbelianGroup::from_cyclic_product(&[6, 2]),
            group(&[2, 6])
        );
        assert_eq!(
            FiniteAbelianGroup::from_cyclic_product(&[6, 4]),
            group(&[2, 12])
        );
        assert_eq!(
            FiniteAbelianGroup::from_cyclic_product(&[1, 1]),
            FiniteAbelianGroup::trivial()
        );
    }

    #[test]
    fn isomorphism_is_chain_equality() {
        assert!(!are_isomorphic(&group(&[12]), &group(&[2, 6])));
        assert!(are_isomorphic(&group(&[2, 12]), &group(&[2, 12])));
        assert!(are_isomorphic(
            &FiniteAbelianGroup::trivial(),
            &FiniteAbelianGroup::trivial()
        ));
        // invariant under permutation of the cyclic-product input
        assert_eq!(
            FiniteAbelianGroup::from_cyclic_product(&[4, 6, 5]),
            FiniteAbelianGroup::from_cyclic_product(&[5, 4, 6])
        );
    }

    #[test]
    fn order_exponent_display() {
        let g = group(&[2, 6]);
        assert_eq!(g.order(), BigUint::from(12u32));
        assert_eq!(g.exponent(), BigUint::from(6u32));
        assert_eq!(g.to_string(), "Z/2 x Z/6");
        assert_eq!(FiniteAbelianGroup::trivial().to_string(), "0");
        assert_eq!(FiniteAbelianGroup::trivial().exponent(), BigUint::one());
    }

    #[test]
    fn sylow_cyclicity() {
        let g = group(&[2, 6]); // Sylow-2 is Z/2 x Z/2, Sylow-3 is Z/3
        assert!(!g.sylow_is_cyclic(2));
        assert!(g.sylow_is_cyclic(3));
        assert!(g.sylow_is_cyclic(5)); // trivial Sylow subgroup is cyclic
        assert!(group(&[12]).sylow_is_cyclic(2));
    }

    #[test]
    fn primary_decomposition_view() {
        let g = group(&[2, 12]);
        let parts: Vec<u64> = g
            .primary_decomposition()
            .iter()
            .map(|p| p.to_u64().unwrap())
            .collect();
        assert_eq!(parts, vec![2, 3, 4]);
    }

    #[test]
    fn figure_subgroups_of_z6_x_z4() {
        // <(2,0),(0,1)> in Z/6 x Z/4 is Z/3 x Z/4 = Z/12 of index 2
        let h1 = SubgroupPresentation::in_pair(6, 4, &[(2, 0), (0, 1)]).unwrap();
        let (s1, i1) = h1.subgroup_from_generators();
        assert_eq!(s1, group(&[12]));
        assert_eq!(i1, BigUint::from(2u32));
        assert_eq!(h1.quotient_by_subgroup(), group(&[2]));

        // <(1,0),(0,2)> is Z/6 x Z/2 of index 2
        let h2 = SubgroupPresentation::in_pair(6, 4, &[(1, 0), (0, 2)]).unwrap();
        let (s2, i2) = h2.subgroup_from_generators();
        assert_eq!(s2, group(&[2, 6]));
        assert_eq!(i2, BigUint::from(2u32));
        assert_eq!(h2.quotient_by_subgroup(), group(&[2]));

        assert!(!are_isomorphic(&s1, &s2));
    }

    #[test]
    fn empty_and_full_generating_sets() {
        let empty = SubgroupPresentation::in_pair(6, 4, &[]).unwrap();
        let (s, i) = empty.subgroup_from_generators();
        assert!(s.is_trivial());
        assert_eq!(i, BigUint::from(24u32));
        assert_eq!(empty.quotient_by_subgroup(), group(&[2, 12]));

        let full = SubgroupPresentation::in_pair(6, 4, &[(1, 0), (0, 1)]).unwrap();
        let (s, i) = full.subgroup_from_generators();
        assert_eq!(s, group(&[2, 12]));
        assert_eq!(i, BigUint::one());
        assert!(full.quotient_by_subgroup().is_trivial());
    }

    #[test]
    fn generator_coordinates_are_reduced() {
        let a = SubgroupPresentation::in_pair(6, 4, &[(8, 5)]).unwrap();
        let b = SubgroupPresentation::in_pair(6, 4, &[(2, 1)]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cokernel_examples() {
        let (rank, tors) = cokernel(&IntMatrix::zeros(2, 2));
        assert_eq!(rank, 2);
        assert!(tors.is_trivial());

        let (rank, tors) = cokernel(&IntMatrix::from_i64(2, 2, &[1, 0, 0, 5]));
        assert_eq!(rank, 0);
        assert_eq!(tors, group(&[5]));

        let (rank, tors) = cokernel(&IntMatrix::from_i64(2, 2, &[1, 1, 1, 0]));
        assert_eq!(rank, 0);
        assert!(tors.is_trivial());
    }
}
