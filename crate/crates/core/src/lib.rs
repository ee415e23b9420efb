//! Concurrence-family entanglement measures for multipartite quantum states of
//! arbitrary local dimension, together with evaluators for weighted monogamy
//! inequalities and four-partite concurrence lower bounds.
//!
//! The crate is organised bottom-up:
//!
//! * [`tensor`] holds the dense complex linear algebra over mixed-radix
//!   subsystem structures (Kronecker products, partial traces, purities,
//!   Hermitian eigendecompositions, density-matrix validation).
//! * [`measures`] computes pure-state concurrence, the two-qubit closed form,
//!   convex-roof concurrence and concurrence of assistance by optimizing over
//!   ensemble decompositions, and the purity cap on the concurrence of
//!   assistance.
//! * [`monogamy`] evaluates the weighted monogamy inequalities and the
//!   four-partite bounds, with explicit bookkeeping of which numbers are exact
//!   and which are one-sided numerical estimates.
//! * [`states`] is the catalog of named states plus seeded random generation.

pub mod error;
pub mod measures;
pub mod monogamy;
pub mod random;
pub mod states;
pub mod tensor;
pub mod tolerance;

pub use error::{Error, Result};
pub use tensor::{C64, DensityMatrix, DimProfile, Partition, PureState};
pub use tolerance::Tolerances;
