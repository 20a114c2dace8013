//! Small dense complex linear algebra, generic over the real scalar type.
//!
//! Dimension 4 (two spins) is the hot path; nothing here is tuned for
//! matrices beyond a few dozen rows.

mod eigh;
mod matrix;
pub mod pauli;
mod scalar;
mod svd;

pub use eigh::{
    eigh, eigvalsh, expm_hermitian, trace_distance, unitary_propagator, EigenDecomposition,
};
pub use matrix::{kron, solve, ComplexMatrix};
pub use scalar::RealScalar;
pub use svd::singular_values;
