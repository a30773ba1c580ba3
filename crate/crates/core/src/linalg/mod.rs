//! Exact integer and rational linear algebra.

pub mod det;
pub mod inertia;
pub mod kernel;
pub mod lattice;
pub mod matrix;
pub mod solve;

pub use det::{determinant, max_minor_of_order, max_subdeterminant, SubdetMode, DEFAULT_MINOR_BUDGET};
pub use inertia::{inertia, inertia_of_restricted_form, Inertia};
pub use kernel::{adjugate_kernel_basis, KernelBasis};
pub use lattice::{integer_solvable, solvable_flat, LatticeFrame, RowTest};
pub use matrix::IntMatrix;
pub use solve::{rank, rowspace_member, solve_rational_system, RowSpace};
