//! First homology of mapping tori, the degree ladder of the covering
//! three-manifolds, and family certificates.
//!
//! Only the base mapping torus is computed: its first homology is
//! Z ⊕ coker(monodromy - I). The homology of the covering mapping tori
//! would need the monodromy action on the homology of the covering
//! surfaces, which this toolkit does not model; every report says so
//! explicitly instead of overstating.

use num_bigint::BigUint;

use crate::abgroup::{cokernel, FiniteAbelianGroup, IntMatrix};
use crate::arith::enumerate_admissible;
use crate::construction::{genus_table, ConstructionInstance};
use crate::covers::{instance_covers, tau_matrix};
use crate::error::{Error, Result};
use crate::lifting::LiftedMap;
use crate::torus::{power_independent_up_to, trace_table, TorusMap};
use num_bigint::BigInt;

/// H1 of the mapping torus with the given fiber monodromy:
/// Z ⊕ coker(monodromy - I), so the free rank is 1 plus the corank and the
/// torsion comes out of the Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingTorusInvariants {
    pub fiber_rank: usize,
    pub monodromy: IntMatrix,
    pub h1_free_rank: usize,
    pub h1_torsion: FiniteAbelianGroup,
}

pub fn mapping_torus_h1(monodromy: &IntMatrix) -> Result<MappingTorusInvariants> {
    if !monodromy.is_square() {
        return Err(Error::Dimension("monodromy must be square".into()));
    }
    let delta = monodromy - &IntMatrix::identity(monodromy.rows());
    let (corank, torsion) = cokernel(&delta);
    Ok(MappingTorusInvariants {
        fiber_rank: monodromy.rows(),
        monodromy: monodromy.clone(),
        h1_free_rank: 1 + corank,
        h1_torsion: torsion,
    })
}

/// Conjugate monodromies give homeomorphic mapping tori; at homology level
/// this is the statement that coker(F^k - I) and coker(τ F^k τ^{-1} - I)
/// agree. When the lift commutes with the involution the two matrices are
/// literally equal and the check is exact on the nose; the record keeps both
/// facts separate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugateMonodromyReport {
    pub matrices_equal: bool,
    pub h1_isomorphic: bool,
    pub base: MappingTorusInvariants,
    pub conjugated: MappingTorusInvariants,
}

pub fn conjugate_monodromy_h1_equal(f: &LiftedMap, k: u64) -> Result<ConjugateMonodromyReport> {
    let p = f.power(k);
    let tau = tau_matrix();
    let q = &(&tau * &p) * &tau; // τ is its own inverse
    let base = mapping_torus_h1(&p)?;
    let conjugated = mapping_torus_h1(&q)?;
    let h1_isomorphic =
        base.h1_free_rank == conjugated.h1_free_rank && base.h1_torsion == conjugated.h1_torsion;
    if !h1_isomorphic {
        return Err(Error::Internal(
            "conjugate monodromies produced different mapping-torus homology".into(),
        ));
    }
    Ok(ConjugateMonodromyReport {
        matrices_equal: p == q,
        h1_isomorphic,
        base,
        conjugated,
    })
}

/// Covering degrees and fiber genera of the tower of mapping tori, with the
/// non-isomorphic deck groups of the two intermediate covers attached as
/// evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverLadder {
    /// |H_i|: the degree of the total mapping torus over each intermediate.
    pub degree_total_over_intermediate: BigUint,
    /// n_B m_A: the degree of each intermediate over the base.
    pub degree_intermediate_over_base: u64,
    /// |G| = n m.
    pub degree_total_over_base: u64,
    pub fiber_genus_total: u64,
    pub fiber_genus_intermediate: u64,
    pub fiber_genus_base: u64,
    pub covering_group_1: FiniteAbelianGroup,
    pub covering_group_2: FiniteAbelianGroup,
    pub witness_prime: u64,
}

pub fn cover_ladder(inst: &ConstructionInstance) -> Result<CoverLadder> {
    let pair = inst.pair();
    let table = genus_table(inst)?;
    let total = (pair.n() as u128) * (pair.m() as u128);
    let intermediate = pair.quotient_order() as u128;
    let degree_total_over_base =
        u64::try_from(total).map_err(|_| Error::Overflow("total degree"))?;
    if !total.is_multiple_of(intermediate) {
        return Err(Error::Internal("degree ladder does not multiply".into()));
    }
    Ok(CoverLadder {
        degree_total_over_intermediate: BigUint::from(total / intermediate),
        degree_intermediate_over_base: pair.quotient_order(),
        degree_total_over_base,
        fiber_genus_total: table.genus_total,
        fiber_genus_intermediate: table.genus_intermediate,
        fiber_genus_base: table.genus_base,
        covering_group_1: inst.h1_structure().clone(),
        covering_group_2: inst.h2_structure().clone(),
        witness_prime: inst.witness_prime(),
    })
}

/// One entry of the pairwise power-independence table. `certified` means the
/// trace tables up to the bound are disjoint, which certifies that no power
/// of one map is conjugate to a power of the other in that range; `false`
/// is merely inconclusive and is flagged, never silently passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceEntry {
    pub first: usize,
    pub second: usize,
    pub certified: bool,
}

/// The family report: several admissible splittings sharing one (n, m), the
/// distinctness of their kernel-lattice pairs, and the pairwise
/// power-independence table of a family of Anosov maps.
#[derive(Clone, Debug)]
pub struct FamilyReport {
    pub n: u64,
    pub m: u64,
    pub family_size: usize,
    pub splittings_found: usize,
    pub kernel_pairs_distinct: bool,
    pub ladders: Vec<CoverLadder>,
    pub independence: Vec<IndependenceEntry>,
    pub trace_tables: Vec<Vec<BigInt>>,
    pub trace_bound: u64,
}

impl FamilyReport {
    /// True when every decidable sub-check passed and none was inconclusive.
    pub fn all_certified(&self) -> bool {
        self.family_size >= 1
            && self.splittings_found >= self.family_size
            && self.kernel_pairs_distinct
            && self.independence.iter().all(|e| e.certified)
    }
}

/// Builds the family certificate for instances that must share one (n, m)
/// and a family of Anosov maps compared pairwise up to the trace bound.
pub fn family_certificate(
    instances: &[ConstructionInstance],
    maps: &[TorusMap],
    trace_bound: u64,
) -> Result<FamilyReport> {
    let first = instances
        .first()
        .ok_or_else(|| Error::CheckFailed("family needs at least one instance".into()))?;
    let (n, m) = (first.pair().n(), first.pair().m());
    if instances
        .iter()
        .any(|i| (i.pair().n(), i.pair().m()) != (n, m))
    {
        return Err(Error::CheckFailed(
            "family instances must share one (n, m)".into(),
        ));
    }

    let splittings_found = enumerate_admissible(n, m).len();

    // kernel-lattice pairs, unordered, must be pairwise distinct
    let mut fingerprints: Vec<Vec<String>> = Vec::new();
    for inst in instances {
        let covers = instance_covers(inst);
        let mut pair = vec![
            covers.phi1.kernel_lattice().to_string(),
            covers.phi2.kernel_lattice().to_string(),
        ];
        pair.sort();
        fingerprints.push(pair);
    }
    let mut sorted = fingerprints.clone();
    sorted.sort();
    sorted.dedup();
    let kernel_pairs_distinct = sorted.len() == fingerprints.len();

    let ladders = instances
        .iter()
        .map(cover_ladder)
        .collect::<Result<Vec<_>>>()?;

    let mut independence = Vec::new();
    for i in 0..maps.len() {
        for j in i + 1..maps.len() {
            independence.push(IndependenceEntry {
                first: i,
                second: j,
                certified: power_independent_up_to(&maps[i], &maps[j], trace_bound)?,
            });
        }
    }
    let trace_tables = maps.iter().map(|m| trace_table(m, trace_bound)).collect();

    Ok(FamilyReport {
        n,
        m,
        family_size: instances.len(),
        splittings_found,
        kernel_pairs_distinct,
        ladders,
        independence,
        trace_tables,
        trace_bound,
    })
}

/// Renders trace tables as CSV: one row per power, one column per map.
pub fn trace_tables_csv(tables: &[Vec<BigInt>]) -> String {
    let mut out = String::from("k");
    for i in 0..tables.len() {
        out.push_str(&format!(",trace_map_{}", i + 1));
    }
    out.push('\n');
    let depth = tables.iter().map(|t| t.len()).max().unwrap_or(0);
    for k in 0..depth {
        out.push_str(&(k + 1).to_string());
        for table in tables {
            out.push(',');
            if let Some(t) = table.get(k) {
                out.push_str(&t.to_string());
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{check_admissible, k_choice_family, PrimeSet};
    use crate::construction::build_instance;
    use crate::lifting::{certificate_power, lift_to_surface};
    use num_traits::Signed;

    fn figure_instance() -> ConstructionInstance {
        let pair =
            check_admissible(6, 4, &PrimeSet::empty(), &PrimeSet::new([2]).unwrap()).unwrap();
        build_instance(&pair).unwrap()
    }

    #[test]
    fn h1_of_small_mapping_tori() {
        // hyperbolic monodromy with |det(M - I)| = 1: h1 = Z
        let inv = mapping_torus_h1(&IntMatrix::from_i64(2, 2, &[2, 1, 1, 1])).unwrap();
        assert_eq!(inv.h1_free_rank, 1);
        assert!(inv.h1_torsion.is_trivial());

        // identity monodromy on the torus: h1 = Z^3
        let inv = mapping_torus_h1(&IntMatrix::identity(2)).unwrap();
        assert_eq!(inv.h1_free_rank, 3);
        assert!(inv.h1_torsion.is_trivial());

        // trace -3: |det(M - I)| = |2 - (-3)| = 5
        let inv = mapping_torus_h1(&IntMatrix::from_i64(2, 2, &[-2, -1, -1, -1])).unwrap();
        assert_eq!(inv.h1_free_rank, 1);
        assert_eq!(inv.h1_torsion.order(), BigUint::from(5u32));
    }

    #[test]
    fn torsion_magnitude_matches_determinant() {
        for entries in [[2i64, 1, 1, 1], [3, 1, 2, 1], [5, 2, 2, 1]] {
            let m = IntMatrix::from_i64(2, 2, &entries);
            for k in 1..5u64 {
                let p = m.pow(k);
                let delta = &p - &IntMatrix::identity(2);
                let det = delta.det().abs().to_biguint().unwrap();
                let inv = mapping_torus_h1(&p).unwrap();
                assert_eq!(inv.h1_free_rank, 1);
                assert_eq!(inv.h1_torsion.order(), det);
            }
        }
    }

    #[test]
    fn conjugate_monodromy_report() {
        let f = lift_to_surface(&TorusMap::from_entries([2, 1, 1, 1]).unwrap()).unwrap();
        let report = conjugate_monodromy_h1_equal(&f, 2).unwrap();
        assert!(report.matrices_equal);
        assert!(report.h1_isomorphic);

        // identity monodromy: both sides have h1 = Z^5 over the rank-4 fiber
        let id = lift_to_surface(&TorusMap::from_entries([1, 0, 0, 1]).unwrap()).unwrap();
        let report = conjugate_monodromy_h1_equal(&id, 1).unwrap();
        assert_eq!(report.base.h1_free_rank, 5);
    }

    #[test]
    fn conjugation_invariance_beyond_commutation() {
        // conjugating by a unimodular matrix that does not commute with the
        // monodromy changes the matrix but not the homology
        let f = lift_to_surface(&TorusMap::from_entries([2, 1, 1, 1]).unwrap()).unwrap();
        let p = f.power(2);
        let c = IntMatrix::from_i64(4, 4, &[1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 2, 0, 1]);
        let q = &(&c * &p) * &c.inverse_unimodular();
        assert_ne!(p, q);
        let a = mapping_torus_h1(&p).unwrap();
        let b = mapping_torus_h1(&q).unwrap();
        assert_eq!(a.h1_free_rank, b.h1_free_rank);
        assert_eq!(a.h1_torsion, b.h1_torsion);
    }

    #[test]
    fn ladder_for_the_figure_instance() {
        let ladder = cover_ladder(&figure_instance()).unwrap();
        assert_eq!(ladder.degree_total_over_intermediate, BigUint::from(12u32));
        assert_eq!(ladder.degree_intermediate_over_base, 2);
        assert_eq!(ladder.degree_total_over_base, 24);
        assert_eq!(ladder.fiber_genus_total, 25);
        assert_eq!(ladder.fiber_genus_intermediate, 3);
        assert_eq!(ladder.fiber_genus_base, 2);
        assert_ne!(ladder.covering_group_1, ladder.covering_group_2);
    }

    #[test]
    fn family_over_two_primes() {
        let family = k_choice_family(&PrimeSet::new([2, 3]).unwrap()).unwrap();
        let instances: Vec<_> = family
            .splittings
            .iter()
            .map(|p| build_instance(p).unwrap())
            .collect();
        let maps = vec![
            TorusMap::from_entries([2, 1, 1, 1]).unwrap(),
            TorusMap::from_entries([3, 1, 2, 1]).unwrap(),
        ];
        let report = family_certificate(&instances, &maps, 10).unwrap();
        assert_eq!((report.n, report.m), (36, 6));
        assert_eq!(report.family_size, 2);
        assert_eq!(report.splittings_found, 3);
        assert!(report.kernel_pairs_distinct);
        assert!(report.independence.iter().all(|e| e.certified));
        assert!(report.all_certified());
        // every ladder sits over the same total cover of genus nm + 1 = 217
        for ladder in &report.ladders {
            assert_eq!(ladder.fiber_genus_total, 217);
        }
    }

    #[test]
    fn degenerate_and_flagged_families() {
        let family = k_choice_family(&PrimeSet::new([2]).unwrap()).unwrap();
        let instances: Vec<_> = family
            .splittings
            .iter()
            .map(|p| build_instance(p).unwrap())
            .collect();
        let one_map = vec![TorusMap::from_entries([2, 1, 1, 1]).unwrap()];
        let report = family_certificate(&instances, &one_map, 10).unwrap();
        assert!(report.independence.is_empty());
        assert!(report.all_certified());

        // a duplicated map is flagged as inconclusive, which fails the family
        let dup = vec![
            TorusMap::from_entries([2, 1, 1, 1]).unwrap(),
            TorusMap::from_entries([2, 1, 1, 1]).unwrap(),
        ];
        let report = family_certificate(&instances, &dup, 10).unwrap();
        assert!(!report.independence[0].certified);
        assert!(!report.all_certified());
    }

    #[test]
    fn csv_rendering() {
        let tables = vec![
            vec![BigInt::from(3), BigInt::from(7)],
            vec![BigInt::from(4), BigInt::from(14)],
        ];
        let csv = trace_tables_csv(&tables);
        assert_eq!(csv, "k,trace_map_1,trace_map_2\n1,3,4\n2,7,14\n");
    }

    #[test]
    fn certificate_power_feeds_the_mapping_torus() {
        let inst = figure_instance();
        let covers = instance_covers(&inst);
        let f = lift_to_surface(&TorusMap::from_entries([2, 1, 1, 1]).unwrap()).unwrap();
        let powers = certificate_power(&covers, &f).unwrap();
        let monodromy = f.power(powers.k_total);
        let inv = mapping_torus_h1(&monodromy).unwrap();
        assert_eq!(inv.fiber_rank, 4);
        assert!(inv.h1_free_rank >= 1);
        // independent cross-check: with no eigenvalue one, the torsion order
        // is exactly |det(monodromy - I)|
        let delta = &monodromy - &IntMatrix::identity(4);
        assert_eq!(inv.h1_free_rank, 1);
        assert_eq!(
            inv.h1_torsion.order(),
            delta.det().abs().to_biguint().unwrap()
        );
    }
}
