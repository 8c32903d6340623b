//! Finitely correlated states on quantum spin chains.
//!
//! A translation-invariant state on the half-infinite chain ⊗ M_d is
//! generated by a completely positive unital map E : M_d ⊗ M_r → M_r
//! together with a shift-invariant state ρ on M_r. This crate builds such
//! maps ([`cpmap`]), recovers the state and its correlations ([`reconstruct`]),
//! probes the entanglement kernel of the state ([`kernel`]), and realizes the
//! chain through the operator-product construction ([`opprod`]).
//! Ready-made models live in [`models`].

pub mod cli;
pub mod cpmap;
pub mod error;
pub mod kernel;
pub mod linalg;
pub mod models;
pub mod opprod;
pub mod random;
pub mod reconstruct;

pub use cpmap::{CpMapData, Word};
pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
