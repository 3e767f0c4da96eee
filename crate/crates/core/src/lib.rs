//! Universal sub-leading terms in ground-state fidelities.
//!
//! The overlap `F(λ, λ′) = |⟨Ψ(λ)|Ψ(λ′)⟩|` of two critical ground states on a
//! ring of `L` sites behaves as `F ≈ g · e^{−f L}`. The bulk rate `f` is
//! model dependent; the O(1) factor `g` is universal and equals a boundary
//! conformal field theory degeneracy.
//!
//! This crate computes `g` in three independent ways and compares them:
//!
//! - [`spin_basis`], [`xxz`], [`eigensolver`] and [`fidelity`]: exact
//!   diagonalization of XXZ rings with a matrix-free Lanczos solver, overlaps
//!   across system sizes, and a least-squares extraction of `ln g`.
//! - [`bcft`]: closed-form free-boson predictions (coupling map, Dirichlet
//!   and Neumann degeneracies, folding, critical–massive value).
//! - [`gaussian`]: exact Gaussian ground states of harmonic rings, whose
//!   overlaps follow `g · e^{−f L}` with no finite-size corrections.
//!
//! For the 2+1 dimensional quantum vertex model, [`cft2d`] evaluates the
//! continuum torus ratio of instanton sums and [`vertex`] computes exact
//! six-vertex partition functions on small tori.
//!
//! [`pipeline`] strings these together into reproducible runs that write
//! CSV/JSON data files; the `gfid` binary is a thin command-line front end.

pub mod bcft;
pub mod cft2d;
pub mod eigensolver;
mod error;
pub mod fidelity;
pub mod gaussian;
pub mod output;
pub mod pipeline;
pub mod scalar;
pub mod spin_basis;
pub mod vertex;
pub mod xxz;

pub use error::{Error, Result};
pub use scalar::Scalar;
