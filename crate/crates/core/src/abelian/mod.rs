//! Exact integer-lattice backend: matrices, Smith normal form, finitely
//! generated abelian groups and their finitely generated submonoids.

mod group;
mod matrix;
mod monoid;
mod snf;

pub use group::{direct_sum, presented_group, quotient, subgroup, AbelianHom, DirectSum, FgAbelianGroup, Presentation, Subgroup};
pub use matrix::IntMatrix;
pub use monoid::{grothendieck_completion, AffineMonoid, Completion, Membership, DEFAULT_BOUND};
pub use snf::{left_kernel, snf, solve_left, SmithForm};
