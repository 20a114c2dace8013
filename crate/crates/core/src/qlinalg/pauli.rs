//! Single-spin operators in the basis `(↑, ↓)` and their two-spin embeddings.

use num_complex::Complex;

use super::{ComplexMatrix, RealScalar};

fn real2<T: RealScalar>(rows: [[f64; 2]; 2]) -> ComplexMatrix<T> {
    ComplexMatrix::from_real_rows(rows)
}

pub fn sigma_x<T: RealScalar>() -> ComplexMatrix<T> {
    real2([[0.0, 1.0], [1.0, 0.0]])
}

pub fn sigma_y<T: RealScalar>() -> ComplexMatrix<T> {
    let i = Complex::new(T::zero(), T::one());
    let mut m = ComplexMatrix::zeros(2);
    m[(0, 1)] = -i;
    m[(1, 0)] = i;
    m
}

pub fn sigma_z<T: RealScalar>() -> ComplexMatrix<T> {
    real2([[1.0, 0.0], [0.0, -1.0]])
}

/// `σ₊ = |↑⟩⟨↓|`.
pub fn sigma_plus<T: RealScalar>() -> ComplexMatrix<T> {
    real2([[0.0, 1.0], [0.0, 0.0]])
}

/// `σ₋ = |↓⟩⟨↑|`.
pub fn sigma_minus<T: RealScalar>() -> ComplexMatrix<T> {
    real2([[0.0, 0.0], [1.0, 0.0]])
}

/// Embeds a single-spin operator acting on `spin` (1 or 2) into the
/// two-spin space.
pub fn on_spin<T: RealScalar>(op: &ComplexMatrix<T>, spin: usize) -> ComplexMatrix<T> {
    let id = ComplexMatrix::identity(2);
    match spin {
        1 => op.kron(&id),
        2 => id.kron(op),
        _ => panic!("spin index must be 1 or 2, got {spin}"),
    }
}
