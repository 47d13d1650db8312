//! Finite-dimensional invariants of pairs of Hadamard subfactors built from
//! complex Hadamard matrices in the class of Fourier tensor products
//! `W = F_{n₁} ⊗ … ⊗ F_{n_k}`.
//!
//! For a pair `U, V` the crate computes the intersection algebra
//! `𝒜ᵁⱽ = Ad_U(Δ_N) ∩ Ad_V(Δ_N)` (two independent ways), the subgroup
//! `H ≤ ℤ_{n₁} × … × ℤ_{n_k}` with `|H| = dim 𝒜ᵁⱽ`, the index `N²/|H|`,
//! the relative commutant dimension, the vertex-model predicate
//! `dim 𝒜ᵁⱽ = 1`, and the modified entropy together with its upper bound
//! `ln(N/dim 𝒜ᵁⱽ)`.
//!
//! All indices are 0-based.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod group;
pub mod hadamard;
pub mod invariants;
pub mod io;
mod linalg;
pub mod matrix;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{DenseMatrix, Tolerance, C64};
