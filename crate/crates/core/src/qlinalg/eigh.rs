use num_complex::Complex;
use num_traits::{One, Zero};

use super::{ComplexMatrix, RealScalar};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Spectral decomposition `H = V diag(ε) V†` of a Hermitian matrix.
///
/// Eigenvalues are ascending. Each eigenvector is normalized with its
/// largest-magnitude component real and positive; inside a degenerate
/// eigenspace the basis is otherwise arbitrary.
#[derive(Clone, Debug)]
pub struct EigenDecomposition<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: ComplexMatrix<T>,
}

impl<T: RealScalar> EigenDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        self.eigenvectors.column(k)
    }

    /// `V f(ε) V†`.
    pub fn map_spectrum(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.dim();
        let v = &self.eigenvectors;
        let fe: Vec<T> = self.eigenvalues.iter().map(|&e| f(e)).collect();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n).fold(Complex::zero(), |acc, k| {
                acc + v[(i, k)] * v[(j, k)].conj() * fe[k]
            })
        })
    }

    /// Expresses `A` in the eigenbasis: `(V† A V)_{ij} = ⟨ε_i|A|ε_j⟩`.
    pub fn to_eigenbasis(&self, a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        &(&self.eigenvectors.adjoint() * a) * &self.eigenvectors
    }

    /// Inverse of [`Self::to_eigenbasis`].
    pub fn from_eigenbasis(&self, a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        &(&self.eigenvectors * a) * &self.eigenvectors.adjoint()
    }
}

fn off_diagonal_norm_sq<T: RealScalar>(a: &ComplexMatrix<T>) -> T {
    let n = a.dim();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// The input is symmetrized after checking that `max|H - H†|` is within
/// `1e-10 · max(1, max|H|)`.
pub fn eigh<T: RealScalar>(h: &ComplexMatrix<T>) -> Result<EigenDecomposition<T>> {
    if !h.is_finite() {
        return Err(Error::Input("matrix has non-finite entries".into()));
    }
    let scale = h.max_abs().max(T::one());
    let herm_err = h.hermiticity_error();
    if herm_err > T::tol(1e-10) * scale {
        return Err(Error::Input(format!(
            "matrix is not Hermitian: max |H - H†| = {herm_err}"
        )));
    }

    let n = h.dim();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::<T>::identity(n);
    let total: T = a.as_slice().iter().fold(T::zero(), |s, z| s + z.norm_sqr());
    let nn = T::from_usize(n * n).unwrap();
    let target = T::epsilon() * T::epsilon() * nn * total.max(T::min_positive_value());

    let mut converged = off_diagonal_norm_sq(&a) <= target;
    let mut sweep = 0;
    while !converged {
        if sweep == MAX_SWEEPS {
            return Err(Error::Numerical(format!(
                "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps"
            )));
        }
        sweep += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        converged = off_diagonal_norm_sq(&a) <= target;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let eigenvalues: Vec<T> = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        let mut vec = v.column(k);
        fix_phase(&mut vec);
        for (row, z) in vec.into_iter().enumerate() {
            eigenvectors[(row, col)] = z;
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// One Jacobi rotation annihilating `a[p][q]`; accumulates into `v`.
fn rotate<T: RealScalar>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let g = a[(p, q)];
    let g_abs = g.norm();
    if g_abs <= T::min_positive_value() {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Phase e^{-iφ} makes the (p, q) element real and positive.
    let phase = g.conj() / g_abs;
    let theta = (aqq - app) / (g_abs + g_abs);
    let t = {
        let t = T::one() / (theta.abs() + (theta * theta + T::one()).sqrt());
        if theta < T::zero() {
            -t
        } else {
            t
        }
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    // U restricted to (p, q): [[c, s], [-s·phase, c·phase]].
    let u_pp = Complex::new(c, T::zero());
    let u_pq = Complex::new(s, T::zero());
    let u_qp = phase * (-s);
    let u_qq = phase * c;

    let n = a.dim();
    // A ← A U
    for k in 0..n {
        let ap = a[(k, p)];
        let aq = a[(k, q)];
        a[(k, p)] = ap * u_pp + aq * u_qp;
        a[(k, q)] = ap * u_pq + aq * u_qq;
    }
    // A ← U† A
    for k in 0..n {
        let ap = a[(p, k)];
        let aq = a[(q, k)];
        a[(p, k)] = u_pp.conj() * ap + u_qp.conj() * aq;
        a[(q, k)] = u_pq.conj() * ap + u_qq.conj() * aq;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
    a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());
    // V ← V U
    for k in 0..n {
        let vp = v[(k, p)];
        let vq = v[(k, q)];
        v[(k, p)] = vp * u_pp + vq * u_qp;
        v[(k, q)] = vp * u_pq + vq * u_qq;
    }
}

fn fix_phase<T: RealScalar>(vec: &mut [Complex<T>]) {
    let mut best = 0;
    let mut best_abs = -T::one();
    for (k, z) in vec.iter().enumerate() {
        let m = z.norm();
        if m > best_abs {
            best = k;
            best_abs = m;
        }
    }
    if best_abs <= T::zero() {
        return;
    }
    let rot = vec[best].conj() / best_abs;
    let norm = vec.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
    for z in vec.iter_mut() {
        *z = *z * rot / norm;
    }
    vec[best] = Complex::new(vec[best].re, T::zero());
}

/// `exp(scale · H)` for Hermitian `H`, via its spectral decomposition.
pub fn expm_hermitian<T: RealScalar>(h: &ComplexMatrix<T>, scale: T) -> Result<ComplexMatrix<T>> {
    let eig = eigh(h)?;
    Ok(eig.map_spectrum(|e| (scale * e).exp()))
}

/// Unitary `exp(-i H t)` for Hermitian `H`.
pub fn unitary_propagator<T: RealScalar>(h: &ComplexMatrix<T>, t: T) -> Result<ComplexMatrix<T>> {
    let eig = eigh(h)?;
    let n = eig.dim();
    let v = &eig.eigenvectors;
    let ph: Vec<Complex<T>> = eig
        .eigenvalues
        .iter()
        .map(|&e| Complex::from_polar(T::one(), -e * t))
        .collect();
    Ok(ComplexMatrix::from_fn(n, |i, j| {
        (0..n).fold(Complex::zero(), |acc, k| acc + v[(i, k)] * ph[k] * v[(j, k)].conj())
    }))
}

/// Eigenvalues only.
pub fn eigvalsh<T: RealScalar>(h: &ComplexMatrix<T>) -> Result<Vec<T>> {
    Ok(eigh(h)?.eigenvalues)
}

/// `½ Σ |eig(ρ₁ - ρ₂)|`.
pub fn trace_distance<T: RealScalar>(rho1: &ComplexMatrix<T>, rho2: &ComplexMatrix<T>) -> Result<T> {
    rho1.check_same_dim(rho2)?;
    let tol = T::tol(1e-6);
    for rho in [rho1, rho2] {
        let tr = rho.trace();
        if (tr - Complex::one()).norm() > tol {
            return Err(Error::Input(format!("state trace {tr} is not 1")));
        }
    }
    let diff = rho1 - rho2;
    let ev = eigvalsh(&diff)?;
    Ok(ev.iter().fold(T::zero(), |s, e| s + e.abs()) * T::lit(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::pauli;
    use approx::assert_abs_diff_eq;

    type M = ComplexMatrix<f64>;

    fn reconstruct(eig: &EigenDecomposition<f64>) -> M {
        eig.map_spectrum(|e| e)
    }

    #[test]
    fn diagonal_input_is_its_own_decomposition() {
        let h = M::from_diagonal(&[-2.0, 0.0, 0.0, 2.0]);
        let eig = eigh(&h).unwrap();
        assert_eq!(eig.eigenvalues, vec![-2.0, 0.0, 0.0, 2.0]);
        assert_eq!(eig.eigenvectors, M::identity(4));
    }

    #[test]
    fn sigma_x_spectrum() {
        let eig = eigh(&pauli::sigma_x::<f64>()).unwrap();
        assert_abs_diff_eq!(eig.eigenvalues[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eig.eigenvalues[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn sigma_y_reconstructs() {
        let y = pauli::sigma_y::<f64>();
        let eig = eigh(&y).unwrap();
        assert!((&reconstruct(&eig) - &y).max_abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = M::from_real_rows([[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(eigh(&m), Err(Error::Input(_))));
    }

    #[test]
    fn works_in_single_precision() {
        let h = ComplexMatrix::<f32>::from_real_rows([[2.0, 1.0], [1.0, 2.0]]);
        let eig = eigh(&h).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-6);
        assert!((eig.eigenvalues[1] - 3.0).abs() < 1e-6);
    }

    #[test]
    fn expm_of_zero_is_identity() {
        let e = expm_hermitian(&M::zeros(4), 0.7).unwrap();
        assert!((&e - &M::identity(4)).max_abs() < 1e-15);
    }

    #[test]
    fn expm_of_diagonal() {
        let e = expm_hermitian(&M::from_diagonal(&[1.0, -1.0]), -1.0).unwrap();
        let want = M::from_diagonal(&[(-1.0f64).exp(), 1.0f64.exp()]);
        assert!((&e - &want).max_abs() < 1e-14);
    }

    #[test]
    fn trace_distance_examples() {
        let up = M::from_diagonal(&[1.0, 0.0]);
        let down = M::from_diagonal(&[0.0, 1.0]);
        assert_abs_diff_eq!(trace_distance(&up, &up).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(trace_distance(&up, &down).unwrap(), 1.0, epsilon = 1e-15);

        // Bell projector vs. I/4: the difference has eigenvalues (3/4, -1/4, -1/4, -1/4).
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell: Vec<_> = [s, 0.0, 0.0, s].iter().map(|&x| Complex::new(x, 0.0)).collect();
        let bell = M::outer(&bell, &bell);
        let mixed = M::identity(4).scale_real(0.25);
        assert_abs_diff_eq!(trace_distance(&mixed, &bell).unwrap(), 0.75, epsilon = 1e-14);
    }

    #[test]
    fn trace_distance_rejects_mismatch() {
        assert!(matches!(
            trace_distance(&M::identity(2).scale_real(0.5), &M::identity(4).scale_real(0.25)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
