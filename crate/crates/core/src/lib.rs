//! Fully entangled fraction (FEF) bounds for bipartite states on `H ⊗ H`.
//!
//! The crate builds the principal (clock-and-shift) operator basis
//! `A_ij = Σ_m ω^{im} E_{m,m+j}` with `ω = exp(2πi/d)`, decomposes density
//! matrices in it and in the generalized Gell-Mann basis, evaluates several
//! upper bounds on
//!
//! ```text
//! F(ρ) = max_U ⟨φ₊|(I ⊗ U†) ρ (I ⊗ U)|φ₊⟩
//! ```
//!
//! and audits each bound against a certified numeric lower estimate of `F(ρ)`
//! obtained by ascent over the unitary group.
//!
//! Basis ordering: `|ij⟩ = |i⟩ ⊗ |j⟩` has row index `i·d + j`, the first factor
//! being subsystem 1.

pub mod basis;
pub mod cli;
pub mod decomposition;
pub mod error;
pub mod fef;
pub mod linalg;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
