//! Exact computation of automorphism groups of finite-dimensional evolution
//! algebras over prime fields and the rationals.
//!
//! The pipeline: an [`algebra::EvolutionAlgebra`] with its natural basis is
//! turned into a weighted graph ([`wgraph`]); graph symmetries are enumerated
//! and each one is tested for liftability by solving a multiplicative
//! monomial system with integer Smith normal form ([`solver`]); the pieces
//! are assembled into the semidirect product `Diag(A;B) x| Aut(E,w)` in
//! [`autgroup`]. [`limits`] handles truncated inverse systems.

pub mod algebra;
pub mod autgroup;
pub mod limits;
pub mod linalg;
pub mod scalar;
pub mod snf;
pub mod solver;
pub mod wgraph;

pub use algebra::{EvolutionAlgebra, Naturality, Vector};
pub use scalar::{FieldSpec, Scalar};
