//! Exact, machine-checkable certificates for a classical construction in
//! surface topology: pairs of conjugate torus-driven maps on a genus-2
//! surface that admit a common lift through two *non-equivalent* regular
//! covers, together with the homology bookkeeping of the associated mapping
//! tori.
//!
//! Everything here is exact integer mathematics: prime-support arithmetic,
//! Smith/Hermite normal forms, finite abelian group algebra, kernel lattices
//! of covers, symplectic lifts of hyperbolic torus maps, and Lefschetz
//! fixed-point counts. Each claim that is finitely checkable is re-verified
//! by direct computation and recorded in a serializable certificate; claims
//! that need geometry beyond homology (hyperbolization, invariant
//! foliations, commensurability classes) are reported as not certified
//! rather than silently assumed.
//!
//! The companion guide under `book/` walks through the mathematics chapter
//! by chapter; its code snippets are compiled as doc-tests.

pub mod abgroup;
pub mod arith;
pub mod certificate;
pub mod construction;
pub mod covers;
pub mod error;
pub mod lifting;
pub mod mapping_torus;
pub mod torus;

pub use abgroup::{FiniteAbelianGroup, IntMatrix, SubgroupPresentation};
pub use arith::{
    check_admissible, enumerate_admissible, k_choice_family, AdmissiblePair, PrimeSet,
};
pub use construction::{build_instance, genus_table, ConstructionInstance, GenusTable};
pub use covers::{covers_equivalent, instance_covers, swap_certificate, CoverSpec};
pub use error::{Error, Result};
pub use lifting::{certificate_power, conjugacy_certificate, lift_to_surface, LiftedMap};
pub use torus::{factor_into_twists, TorusMap, TwistWord};
