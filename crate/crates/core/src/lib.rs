//! Open-system dynamics of a classically oscillating two-spin molecule.
//!
//! Two spins move along a prescribed classical trajectory; their separation
//! sets an Ising coupling `J(t)` and their position a local field `B(t)`.
//! The spin state evolves under a Lindblad master equation whose generators
//! either follow the instantaneous eigenbasis of the Hamiltonian (bosonic
//! heat baths) or are fixed local gain/loss channels (spin-gas collisions).
//!
//! Units: `ħ = k_B = 1`, energies in multiples of the thermal energy.
//! Two-spin operators use the product basis `(↑↑, ↑↓, ↓↑, ↓↓)`, spin 1 on the
//! left of every tensor product.
//!
//! The linear algebra in [`qlinalg`] is generic over the real scalar; the
//! physics layers work in `f64` through the aliases below.

// Negated comparisons are used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod environment;
mod error;
pub mod molecule;
pub mod observables;
pub mod qlinalg;

pub use error::{Error, Result};

/// Real scalar used by the simulation layers.
pub type Real = f64;
/// Complex scalar used by the simulation layers.
pub type C64 = num_complex::Complex<f64>;
/// Density matrices, Hamiltonians and Lindblad generators.
pub type CMatrix = qlinalg::ComplexMatrix<f64>;
/// Eigendecomposition of a [`CMatrix`].
pub type Eigen = qlinalg::EigenDecomposition<f64>;
