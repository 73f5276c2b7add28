//! Instantiates the central objects attached to an admissible splitting: the
//! deck group G = Z/n x Z/m, its two normal subgroups of equal order, their
//! quotients, and the genus ladder of the covering surfaces.
//!
//! Every structural claim is re-verified through the lattice engine rather
//! than assumed from the defining formulas: the subgroup structures come out
//! of Smith normal forms of the generator lattices, and the construction
//! fails loudly if any verified identity is violated (which would indicate a
//! bug, not bad input).

use num_bigint::BigUint;

use crate::abgroup::{are_isomorphic, FiniteAbelianGroup, SubgroupPresentation};
use crate::arith::AdmissiblePair;
use crate::error::{Error, Result};

/// The two subgroups, their quotients, and the non-isomorphism witness for
/// one admissible splitting.
#[derive(Clone, Debug)]
pub struct ConstructionInstance {
    pair: AdmissiblePair,
    g: FiniteAbelianGroup,
    h1: SubgroupPresentation,
    h2: SubgroupPresentation,
    h1_structure: FiniteAbelianGroup,
    h2_structure: FiniteAbelianGroup,
    q1: FiniteAbelianGroup,
    q2: FiniteAbelianGroup,
    witness_prime: u64,
}

impl ConstructionInstance {
    pub fn pair(&self) -> &AdmissiblePair {
        &self.pair
    }
    /// The deck group Z/n x Z/m in canonical form.
    pub fn deck_group(&self) -> &FiniteAbelianGroup {
        &self.g
    }
    /// First subgroup, generated by (n_B, 0) and (0, m_A).
    pub fn h1(&self) -> &SubgroupPresentation {
        &self.h1
    }
    /// Second subgroup, generated by (m_A, 0) and (0, n_B).
    pub fn h2(&self) -> &SubgroupPresentation {
        &self.h2
    }
    pub fn h1_structure(&self) -> &FiniteAbelianGroup {
        &self.h1_structure
    }
    pub fn h2_structure(&self) -> &FiniteAbelianGroup {
        &self.h2_structure
    }
    pub fn quotient1(&self) -> &FiniteAbelianGroup {
        &self.q1
    }
    pub fn quotient2(&self) -> &FiniteAbelianGroup {
        &self.q2
    }
    /// A prime p in A ∪ B whose Sylow p-subgroup is cyclic in H1 but not in
    /// H2; the concrete witness that the subgroups are not isomorphic.
    pub fn witness_prime(&self) -> u64 {
        self.witness_prime
    }
}

fn check(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Internal(format!(
            "construction invariant failed: {what}"
        )))
    }
}

/// Builds and fully verifies the instance attached to an admissible pair.
///
/// The subgroups are realized by two-generator presentations inside
/// Z/n x Z/m; their structures and indices are computed from the generators
/// via Smith normal forms and then cross-checked against the product
/// formulas n/n_B * m/m_A and n/m_A * m/n_B.
pub fn build_instance(pair: &AdmissiblePair) -> Result<ConstructionInstance> {
    let (n, m) = (pair.n(), pair.m());
    let g = FiniteAbelianGroup::from_cyclic_product(&[n, m]);

    let h1 = SubgroupPresentation::in_pair(n, m, &[(pair.n_b(), 0), (0, pair.m_a())])?;
    let h2 = SubgroupPresentation::in_pair(n, m, &[(pair.m_a(), 0), (0, pair.n_b())])?;

    let (h1_structure, index1) = h1.subgroup_from_generators();
    let (h2_structure, index2) = h2.subgroup_from_generators();
    let q1 = h1.quotient_by_subgroup();
    let q2 = h2.quotient_by_subgroup();

    // |H1| = |H2| = nm / (n_B m_A) = n_A m_B n_C m_D > 1
    let quotient_order = BigUint::from(pair.quotient_order());
    let expected_order = BigUint::from(n) * BigUint::from(m) / &quotient_order;
    let product_form = BigUint::from(pair.n_a())
        * BigUint::from(pair.m_b())
        * BigUint::from(pair.n_c())
        * BigUint::from(pair.m_d());
    check(
        h1_structure.order() == expected_order,
        "|H1| = nm/(n_B m_A)",
    )?;
    check(
        h2_structure.order() == expected_order,
        "|H2| = nm/(n_B m_A)",
    )?;
    check(
        product_form == expected_order,
        "nm/(n_B m_A) = n_A m_B n_C m_D",
    )?;
    check(expected_order > BigUint::from(1u32), "|H_i| > 1")?;
    check(index1 == quotient_order, "index of H1 is n_B m_A")?;
    check(index2 == quotient_order, "index of H2 is n_B m_A")?;

    // the generator presentations reproduce the cyclic product formulas
    let h1_formula = FiniteAbelianGroup::from_cyclic_product(&[n / pair.n_b(), m / pair.m_a()]);
    let h2_formula = FiniteAbelianGroup::from_cyclic_product(&[n / pair.m_a(), m / pair.n_b()]);
    check(
        h1_structure == h1_formula,
        "H1 matches Z/(n/n_B) x Z/(m/m_A)",
    )?;
    check(
        h2_structure == h2_formula,
        "H2 matches Z/(n/m_A) x Z/(m/n_B)",
    )?;

    check(
        !are_isomorphic(&h1_structure, &h2_structure),
        "H1 and H2 are not isomorphic",
    )?;

    // both quotients cyclic of order n_B m_A
    let cyclic = FiniteAbelianGroup::from_cyclic_product(&[pair.quotient_order()]);
    check(q1 == cyclic, "G/H1 cyclic of order n_B m_A")?;
    check(q2 == cyclic, "G/H2 cyclic of order n_B m_A")?;

    // the witness prime search always succeeds on admissible input
    let witness_prime = pair
        .a_set()
        .union(pair.b_set())
        .iter()
        .find(|&p| h1_structure.sylow_is_cyclic(p) && !h2_structure.sylow_is_cyclic(p))
        .ok_or_else(|| {
            Error::Internal("no witness prime distinguishes the Sylow subgroups".into())
        })?;

    Ok(ConstructionInstance {
        pair: pair.clone(),
        g,
        h1,
        h2,
        h1_structure,
        h2_structure,
        q1,
        q2,
        witness_prime,
    })
}

/// Genus and Euler characteristic bookkeeping for the tower of surfaces: the
/// base of genus 2, the two intermediate covers of genus n_B m_A + 1, and
/// the total cover of genus nm + 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusTable {
    pub genus_base: u64,
    pub genus_intermediate: u64,
    pub genus_total: u64,
    pub euler_base: i128,
    pub euler_intermediate: i128,
    pub euler_total: i128,
}

/// Computes the genus ladder and independently cross-checks the Euler
/// characteristic multiplicativity of free actions in both directions:
/// χ(total) = |H_i| χ(intermediate) = |G| χ(base).
pub fn genus_table(inst: &ConstructionInstance) -> Result<GenusTable> {
    let pair = inst.pair();
    let nm = (pair.n() as u128)
        .checked_mul(pair.m() as u128)
        .ok_or(Error::Overflow("n*m"))?;
    let intermediate_degree = pair.quotient_order() as u128;

    let genus_base = 2u64;
    let genus_intermediate = u64::try_from(intermediate_degree + 1)
        .map_err(|_| Error::Overflow("intermediate genus"))?;
    let genus_total = u64::try_from(nm + 1).map_err(|_| Error::Overflow("total genus"))?;

    let euler_base = 2 - 2 * genus_base as i128;
    let euler_intermediate = 2 - 2 * (genus_intermediate as i128);
    let euler_total = 2 - 2 * (nm as i128 + 1);

    let h_order = nm / intermediate_degree;
    if euler_total != (h_order as i128) * euler_intermediate {
        return Err(Error::Internal(
            "Euler characteristic is not multiplicative over the intermediate cover".into(),
        ));
    }
    if euler_total != (nm as i128) * euler_base {
        return Err(Error::Internal(
            "Euler characteristic is not multiplicative over the full cover".into(),
        ));
    }

    Ok(GenusTable {
        genus_base,
        genus_intermediate,
        genus_total,
        euler_base,
        euler_intermediate,
        euler_total,
    })
}
