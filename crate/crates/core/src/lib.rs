//! Exact computation of R-diagrams for modules over the p-pullback ring
//! `R = {(a, b) in Z x Z : a = b mod p}`.
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`]: integer matrices, Hermite/Smith normal forms, lattices and `F_p` algebra.
//! * [`module`]: finitely generated abelian groups as generators and a relation lattice.
//! * [`pullback`]: the ring `R`, pullback diagrams, separation of modules and morphisms.
//! * [`reduction`]: separated presentations and their reduction to R-diagrams.
//! * [`homology`]: separated presentations of homology of complexes of free `R`-modules.
//! * [`oracle`]: independent underlying-group invariants used as ground truth.

pub mod error;
pub mod homology;
pub mod linalg;
pub mod module;
pub mod oracle;
pub mod pullback;
pub mod random;
pub mod reduction;

pub use error::{Error, Result};
