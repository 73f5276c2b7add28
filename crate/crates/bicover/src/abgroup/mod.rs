//! Exact integer-lattice engine: matrices, Smith/Hermite normal forms, and
//! finite abelian group algebra (canonical forms, subgroups, quotients,
//! cokernels). Every other module computes through this one.

pub mod group;
pub mod matrix;
pub mod normal_form;
pub mod poly;

pub use group::{are_isomorphic, cokernel, FiniteAbelianGroup, SubgroupPresentation};
pub use matrix::IntMatrix;
pub use normal_form::{
    hermite_normal_form, kernel_basis, row_hnf, smith_normal_form, SmithDecomposition,
};
