//! Computational workbench for spectral triples on the odd-dimensional
//! quantum spheres `S_q^{2l+1}`.
//!
//! The crate is organised bottom-up:
//!
//! - [`qcore`]: q-numbers, `Q(n)`, binomial polynomials, Riemann zeta.
//! - [`tableaux`]: Gelfand-Tsetlin patterns, moves, quantum dimensions and
//!   the bijection between the sphere basis and the lattice `N^l x Z x N^l`.
//! - [`cg`]: Clebsch-Gordan coefficients of the fundamental representation
//!   in direct and factorized form.
//! - [`operators`]: truncated Hilbert spaces and sparse operators.
//! - [`torus_triple`]: the torus-equivariant triple and its smooth algebra.
//! - [`equivariant_triple`]: the quantum-group-equivariant triple.
//! - [`spectral_zeta`]: meromorphic continuation of spectral traces.
//!
//! Column-wise assembly runs on rayon when the `parallel` feature is on
//! (the default); see [`par`].

pub mod cg;
pub mod equivariant_triple;
pub mod error;
pub mod operators;
pub mod par;
pub mod qcore;
pub mod spectral_zeta;
pub mod tableaux;
pub mod torus_triple;

pub use error::{Error, Result};
pub use par::Execution;
pub use qcore::{Precision, QContext, Rational};
