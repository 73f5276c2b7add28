//! Regular covers of the genus-2 base surface, classified by homomorphisms
//! from its rank-4 homology lattice onto finite abelian deck groups.
//!
//! The symplectic basis is ordered (a1, b1, a2, b2). The classes a1 and a2
//! survive the handlebody inclusion (they are the images of the meridian and
//! longitude of the quotient torus pushed to the boundary), while b1 and b2
//! are the dual handle classes killed by it; every cover built here sends
//! them to zero. The handle-swap involution exchanges (a1, b1) with
//! (a2, b2).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::abgroup::{
    hermite_normal_form, kernel_basis, FiniteAbelianGroup, IntMatrix, SubgroupPresentation,
};
use crate::construction::ConstructionInstance;
use crate::error::{Error, Result};

/// A regular cover of a closed orientable surface, given by the images of
/// the ordered symplectic basis (a1, b1, ..., ag, bg) in a finite abelian
/// deck group. The target is carried as an explicit cyclic presentation
/// Z/o1 x ... x Z/ok, with image coordinates reduced modulo the orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSpec {
    base_genus: usize,
    orders: Vec<u64>,
    images: Vec<Vec<u64>>,
}

impl CoverSpec {
    pub fn new(base_genus: usize, orders: Vec<u64>, images: Vec<Vec<u64>>) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::ZeroValue);
        }
        if images.len() != 2 * base_genus {
            return Err(Error::Dimension(format!(
                "expected {} basis images, got {}",
                2 * base_genus,
                images.len()
            )));
        }
        let images = images
            .into_iter()
            .map(|img| {
                if img.len() != orders.len() {
                    return Err(Error::Dimension(format!(
                        "image has {} coordinates, target has {} factors",
                        img.len(),
                        orders.len()
                    )));
                }
                Ok(img.iter().zip(&orders).map(|(&x, &o)| x % o).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CoverSpec {
            base_genus,
            orders,
            images,
        })
    }

    pub fn base_genus(&self) -> usize {
        self.base_genus
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn images(&self) -> &[Vec<u64>] {
        &self.images
    }

    /// The canonical form of the target presentation.
    pub fn target_group(&self) -> FiniteAbelianGroup {
        FiniteAbelianGroup::from_cyclic_product(&self.orders)
    }

    /// The subgroup of the target generated by the images, with its index.
    pub fn image_subgroup(&self) -> (FiniteAbelianGroup, BigUint) {
        let pres = SubgroupPresentation::new(self.orders.clone(), self.images.clone())
            .expect("cover data is validated on construction");
        pres.subgroup_from_generators()
    }

    /// A regular cover is connected exactly when its monodromy is onto, i.e.
    /// the images generate the deck group.
    pub fn is_connected(&self) -> bool {
        self.image_subgroup().1.is_one()
    }

    /// The covering degree: the order of the image subgroup.
    pub fn degree(&self) -> BigUint {
        self.image_subgroup().0.order()
    }

    /// The image of an integer homology class, as reduced coordinates.
    pub fn apply(&self, v: &[BigInt]) -> Vec<u64> {
        assert_eq!(v.len(), self.images.len(), "class has wrong rank");
        self.orders
            .iter()
            .enumerate()
            .map(|(c, &o)| {
                let big_o = BigInt::from(o);
                let mut acc = BigInt::zero();
                for (j, coeff) in v.iter().enumerate() {
                    acc += coeff * BigInt::from(self.images[j][c]);
                }
                acc.mod_floor(&big_o).to_u64().expect("reduced mod o")
            })
            .collect()
    }

    /// Precomposition with an integer matrix on homology: the cover whose
    /// classifying map sends v to self(M v).
    pub fn precompose(&self, m: &IntMatrix) -> CoverSpec {
        let rank = self.images.len();
        assert_eq!(
            (m.rows(), m.cols()),
            (rank, rank),
            "matrix must act on the basis"
        );
        let images = (0..rank)
            .map(|j| {
                let col: Vec<BigInt> = (0..rank).map(|i| m.get(i, j).clone()).collect();
                self.apply(&col)
            })
            .collect();
        CoverSpec {
            base_genus: self.base_genus,
            orders: self.orders.clone(),
            images,
        }
    }

    /// Canonical Hermite basis of the kernel sublattice
    /// {v : v1 images_1 + ... = 0 in the target}. For a surface of genus g
    /// this is a full-rank sublattice of Z^(2g), and its index equals the
    /// order of the image subgroup.
    pub fn kernel_lattice(&self) -> IntMatrix {
        let rank = self.images.len();
        let k = self.orders.len();
        // rows: target coordinates; columns: basis classes then relations
        let map = IntMatrix::from_fn(k, rank, |c, j| BigInt::from(self.images[j][c]));
        let relations = IntMatrix::diagonal(
            &self
                .orders
                .iter()
                .map(|&o| BigInt::from(o))
                .collect::<Vec<_>>(),
        );
        let ker = kernel_basis(&map.hstack(&relations));
        debug_assert_eq!(ker.cols(), rank, "kernel of an augmented full-rank map");
        let generators = IntMatrix::from_fn(rank, ker.cols(), |i, j| ker.get(i, j).clone());
        hermite_normal_form(&generators)
    }

    /// Genus of the total space, degree * (base_genus - 1) + 1. Rejects
    /// disconnected covers, whose total space is not a surface.
    pub fn cover_genus(&self) -> Result<u64> {
        if !self.is_connected() {
            return Err(Error::DisconnectedCover);
        }
        let degree = self.degree();
        let genus = degree * BigUint::from(self.base_genus as u64 - 1) + BigUint::one();
        genus.to_u64().ok_or(Error::Overflow("cover genus"))
    }
}

/// Two regular covers of the same base are equivalent exactly when their
/// kernel sublattices coincide; basepoints are deliberately ignored.
pub fn covers_equivalent(s1: &CoverSpec, s2: &CoverSpec) -> Result<bool> {
    if s1.base_genus != s2.base_genus {
        return Err(Error::Dimension(
            "covers of different base surfaces are never compared".into(),
        ));
    }
    Ok(s1.kernel_lattice() == s2.kernel_lattice())
}

/// The handle-swap involution on the (a1, b1, a2, b2) basis.
pub fn tau_matrix() -> IntMatrix {
    IntMatrix::from_i64(
        4,
        4,
        &[
            0, 0, 1, 0, //
            0, 0, 0, 1, //
            1, 0, 0, 0, //
            0, 1, 0, 0,
        ],
    )
}

/// Gram matrix of the intersection form on (a1, b1, ..., ag, bg):
/// <a_i, b_i> = 1, <b_i, a_i> = -1, all other pairings zero.
pub fn symplectic_gram(genus: usize) -> IntMatrix {
    let mut j = IntMatrix::zeros(2 * genus, 2 * genus);
    for i in 0..genus {
        j.set(2 * i, 2 * i + 1, BigInt::one());
        j.set(2 * i + 1, 2 * i, -BigInt::one());
    }
    j
}

/// Whether M preserves the intersection form: M^T J M = J.
pub fn is_symplectic(m: &IntMatrix) -> bool {
    if !m.is_square() || !m.rows().is_multiple_of(2) {
        return false;
    }
    let j = symplectic_gram(m.rows() / 2);
    &(&m.transpose() * &j) * m == j
}

/// The three covers attached to a construction instance.
///
/// `full` classifies the total cover: a1 and a2 map to the generators (1, 0)
/// and (0, 1) of Z/n x Z/m and the handle classes b1, b2 map to zero. The
/// other two are its compositions with the quotient maps by the two
/// subgroups, which read off coordinates modulo (n_B, m_A) and (m_A, n_B)
/// respectively. Which of the two deck groups is listed first is a fixed
/// convention of this toolkit; the generator orders are recorded so the
/// labelling is never ambiguous.
#[derive(Clone, Debug)]
pub struct InstanceCovers {
    pub full: CoverSpec,
    pub phi1: CoverSpec,
    pub phi2: CoverSpec,
}

pub fn instance_covers(inst: &ConstructionInstance) -> InstanceCovers {
    let pair = inst.pair();
    let (n, m) = (pair.n(), pair.m());
    let full = CoverSpec::new(
        2,
        vec![n, m],
        vec![vec![1, 0], vec![0, 0], vec![0, 1], vec![0, 0]],
    )
    .expect("orders are positive");
    let phi1 = CoverSpec::new(
        2,
        vec![pair.n_b(), pair.m_a()],
        vec![vec![1, 0], vec![0, 0], vec![0, 1], vec![0, 0]],
    )
    .expect("orders are positive");
    let phi2 = CoverSpec::new(
        2,
        vec![pair.m_a(), pair.n_b()],
        vec![vec![1, 0], vec![0, 0], vec![0, 1], vec![0, 0]],
    )
    .expect("orders are positive");
    InstanceCovers { full, phi1, phi2 }
}

/// The verified record that the involution swaps the two intermediate
/// covers: τ has order two, preserves the intersection form, carries the
/// kernel lattice of each cover onto the other, and after the canonical
/// exchange of the two cyclic factors the literal identity phi2 = phi1 ∘ τ
/// holds. Produced only when every check passes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwapCertificate {
    pub tau_order_two: bool,
    pub tau_symplectic: bool,
    pub kernels_exchanged: bool,
    pub literal_after_factor_swap: bool,
}

fn swap_two_factors(spec: &CoverSpec) -> CoverSpec {
    assert_eq!(
        spec.orders.len(),
        2,
        "factor swap is for two-factor targets"
    );
    CoverSpec {
        base_genus: spec.base_genus,
        orders: vec![spec.orders[1], spec.orders[0]],
        images: spec.images.iter().map(|img| vec![img[1], img[0]]).collect(),
    }
}

/// Hermite form of the image of a lattice under an integer matrix.
fn transformed_lattice(m: &IntMatrix, basis: &IntMatrix) -> IntMatrix {
    hermite_normal_form(&(m * basis))
}

pub fn swap_certificate(inst: &ConstructionInstance) -> Result<SwapCertificate> {
    let covers = instance_covers(inst);
    let tau = tau_matrix();

    let tau_order_two = (&tau * &tau).is_identity();
    let tau_symplectic = is_symplectic(&tau);

    let k1 = covers.phi1.kernel_lattice();
    let k2 = covers.phi2.kernel_lattice();
    let kernels_exchanged =
        transformed_lattice(&tau, &k1) == k2 && transformed_lattice(&tau, &k2) == k1;

    let literal_after_factor_swap = swap_two_factors(&covers.phi1.precompose(&tau)) == covers.phi2;

    let cert = SwapCertificate {
        tau_order_two,
        tau_symplectic,
        kernels_exchanged,
        literal_after_factor_swap,
    };
    if !(tau_order_two && tau_symplectic && kernels_exchanged && literal_after_factor_swap) {
        return Err(Error::CheckFailed(format!("involution swap: {cert:?}")));
    }
    Ok(cert)
}
