use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{One, Zero};

use super::RealScalar;
use crate::error::{Error, Result};

/// Dense square complex matrix, stored row-major.
///
/// Two-spin operators use the product basis `(↑↑, ↑↓, ↓↑, ↓↓)` with spin 1
/// as the left tensor factor; single-spin operators use `(↑, ↓)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: RealScalar> ComplexMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, T::zero());
        }
        m
    }

    /// Builds a matrix from row-major entries; fails unless `data.len()` is a
    /// perfect square.
    pub fn from_vec(data: Vec<Complex<T>>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != data.len() {
            return Err(Error::Input(format!(
                "{} entries do not form a square matrix",
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros(N);
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = Complex::new(T::lit(x), T::zero());
            }
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &[Complex<T>], v: &[Complex<T>]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `max |A - A†|`.
    pub fn hermiticity_error(&self) -> T {
        let mut err = T::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                err = err.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        err
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    /// `self · X · self†`, the sandwich appearing in the Lindblad dissipator.
    pub fn sandwich(&self, x: &Self) -> Self {
        &(self * x) * &self.adjoint()
    }

    /// `⟨u|A|v⟩`.
    pub fn expectation(&self, u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
        let mut acc = Complex::zero();
        for i in 0..self.dim {
            let mut row = Complex::zero();
            for j in 0..self.dim {
                row += self[(i, j)] * v[j];
            }
            acc += u[i].conj() * row;
        }
        acc
    }

    /// `A ⊗ B` with `self` as the left factor.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        Self::from_fn(n * m, |r, c| {
            self[(r / m, c / m)] * other[(r % m, c % m)]
        })
    }

    /// Row-major flattening, used for vectorized superoperators.
    pub fn to_vec(&self) -> Vec<Complex<T>> {
        self.data.clone()
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    /// Fused `self += s · other`.
    pub fn add_scaled(&mut self, other: &Self, s: T) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: RealScalar> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl<T: RealScalar> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<T: RealScalar> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<T: RealScalar> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        self.scale_real(-T::one())
    }
}

impl<T: RealScalar> AddAssign<&ComplexMatrix<T>> for ComplexMatrix<T> {
    fn add_assign(&mut self, rhs: &ComplexMatrix<T>) {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl<T: RealScalar> SubAssign<&ComplexMatrix<T>> for ComplexMatrix<T> {
    fn sub_assign(&mut self, rhs: &ComplexMatrix<T>) {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

/// Free-function form of [`ComplexMatrix::kron`].
pub fn kron<T: RealScalar>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    a.kron(b)
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
///
/// Fails when a pivot falls below `rel_tol · max|A|`.
pub fn solve<T: RealScalar>(
    a: &ComplexMatrix<T>,
    b: &[Complex<T>],
    rel_tol: T,
) -> Result<Vec<Complex<T>>> {
    let n = a.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: b.len(),
        });
    }
    let scale = a.max_abs().max(T::min_positive_value());
    let mut m = a.clone();
    let mut x = b.to_vec();
    for col in 0..n {
        let (piv, piv_abs) = (col..n)
            .map(|r| (r, m[(r, col)].norm()))
            .fold((col, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if piv_abs <= rel_tol * scale {
            return Err(Error::Numerical(format!(
                "singular linear system: pivot {piv_abs} in column {col}"
            )));
        }
        if piv != col {
            for j in 0..n {
                let tmp = m[(col, j)];
                m[(col, j)] = m[(piv, j)];
                m[(piv, j)] = tmp;
            }
            x.swap(col, piv);
        }
        let p = m[(col, col)];
        for r in col + 1..n {
            let f = m[(r, col)] / p;
            if f.is_zero() {
                continue;
            }
            for j in col..n {
                let v = m[(col, j)];
                m[(r, j)] -= f * v;
            }
            let v = x[col];
            x[r] -= f * v;
        }
    }
    for r in (0..n).rev() {
        let mut acc = x[r];
        for j in r + 1..n {
            acc -= m[(r, j)] * x[j];
        }
        x[r] = acc / m[(r, r)];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::pauli;

    type M = ComplexMatrix<f64>;

    #[test]
    fn kron_of_identities_is_identity() {
        assert_eq!(M::identity(2).kron(&M::identity(2)), M::identity(4));
    }

    #[test]
    fn total_sigma_z_is_diagonal() {
        let z = pauli::sigma_z::<f64>();
        let i2 = M::identity(2);
        let total = &z.kron(&i2) + &i2.kron(&z);
        assert_eq!(total, M::from_diagonal(&[2.0, 0.0, 0.0, -2.0]));
    }

    #[test]
    fn sigma_x_pair_is_antidiagonal() {
        let x = pauli::sigma_x::<f64>();
        let xx = kron(&x, &x);
        let expected = M::from_fn(4, |i, j| {
            if i + j == 3 {
                Complex::one()
            } else {
                Complex::zero()
            }
        });
        assert_eq!(xx, expected);
    }

    #[test]
    fn solve_recovers_known_solution() {
        let a = M::from_real_rows([[4.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 2.0]]);
        let x = [1.0, -2.0, 0.5].map(|v| Complex::new(v, 0.0));
        let b: Vec<_> = (0..3)
            .map(|i| (0..3).map(|j| a[(i, j)] * x[j]).sum())
            .collect();
        let got = solve(&a, &b, 1e-12).unwrap();
        for (g, e) in got.iter().zip(&x) {
            assert!((g - e).norm() < 1e-12);
        }
    }

    #[test]
    fn solve_rejects_singular() {
        let a = M::from_real_rows([[1.0, 2.0], [2.0, 4.0]]);
        let b = vec![Complex::one(), Complex::zero()];
        assert!(matches!(solve(&a, &b, 1e-12), Err(Error::Numerical(_))));
    }

    #[test]
    fn from_vec_requires_square() {
        assert!(M::from_vec(vec![Complex::zero(); 3]).is_err());
        assert_eq!(M::from_vec(vec![Complex::zero(); 9]).unwrap().dim(), 3);
    }
}
