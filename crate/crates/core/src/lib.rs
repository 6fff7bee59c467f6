//! Computational engine for right-preordered groups.
//!
//! A right-preordered group is a group together with a preorder invariant
//! under right translation; such preorders correspond exactly to submonoids
//! (positive cones) via `x <= y` iff `y - x ∈ P`. This crate represents
//! groups by finite operation tables, finitely generated abelian
//! presentations, the rationals, or semidirect products of these, and cones
//! by explicit subsets, generators, builtin predicates or derived
//! constructions. Cone membership that can only be searched boundedly is
//! answered with a three-valued [`Tri`].

pub mod abelian;
pub mod action;
pub mod carrier;
pub mod catops;
pub mod cone;
pub mod element;
pub mod error;
pub mod finite;
pub mod group;
pub mod morphism;
pub mod splitext;
pub mod tri;

pub use action::{Automorphism, GroupAction};
pub use carrier::Carrier;
pub use cone::Cone;
pub use element::Element;
pub use error::{Error, Result};
pub use group::RPGroup;
pub use morphism::{HomMap, Morphism};
pub use tri::{Tri, Verdict};
