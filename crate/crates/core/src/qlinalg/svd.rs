use num_complex::Complex;
use num_traits::Zero;

use super::{ComplexMatrix, RealScalar};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Singular values of a square complex matrix, descending, by one-sided
/// (Hestenes) Jacobi orthogonalization of the columns.
///
/// Small singular values come out with absolute accuracy of order
/// `eps · ‖G‖`, unlike square roots of the eigenvalues of `G G†`.
pub fn singular_values<T: RealScalar>(g: &ComplexMatrix<T>) -> Result<Vec<T>> {
    if !g.is_finite() {
        return Err(Error::Input("matrix has non-finite entries".into()));
    }
    let n = g.dim();
    // Column-major working copy.
    let mut cols: Vec<Vec<Complex<T>>> = (0..n).map(|j| g.column(j)).collect();
    let eps = T::epsilon();
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm_sq(&cols[p]);
                let beta = norm_sq(&cols[q]);
                let gamma = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .fold(Complex::<T>::zero(), |acc, (a, b)| acc + a.conj() * *b);
                let g_abs = gamma.norm();
                if g_abs <= eps * (alpha * beta).sqrt() || g_abs <= T::min_positive_value() {
                    continue;
                }
                rotated = true;
                let phase: Complex<T> = gamma.conj().unscale(g_abs);
                let theta = (beta - alpha) / (g_abs + g_abs);
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
                let u_pp = Complex::new(c, T::zero());
                let u_pq = Complex::new(s, T::zero());
                let u_qp = phase.scale(-s);
                let u_qq = phase.scale(c);
                let (left, right) = cols.split_at_mut(q);
                for (a, b) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let (x, y) = (*a, *b);
                    *a = x * u_pp + y * u_qp;
                    *b = x * u_pq + y * u_qq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "one-sided Jacobi SVD did not converge in {MAX_SWEEPS} sweeps"
        )));
    }
    let mut sv: Vec<T> = cols.iter().map(|c| norm_sq(c).sqrt()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(sv)
}

fn norm_sq<T: RealScalar>(v: &[Complex<T>]) -> T {
    v.iter().fold(T::zero(), |s, z| s + z.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_unitary() {
        let d = ComplexMatrix::<f64>::from_diagonal(&[3.0, -1.0, 2.0]);
        assert_eq!(singular_values(&d).unwrap(), vec![3.0, 2.0, 1.0]);
        let i = Complex::new(0.0, 1.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = ComplexMatrix::from_vec(vec![
            Complex::new(s, 0.0),
            i * s,
            i * s,
            Complex::new(s, 0.0),
        ])
        .unwrap();
        for v in singular_values(&u).unwrap() {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rank_one_has_exact_zero_tail() {
        let v = [1.0, 2.0, -0.5, 0.25].map(|x| Complex::new(x, 0.3 * x));
        let m = ComplexMatrix::outer(&v, &v);
        let sv = singular_values(&m).unwrap();
        let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert!((sv[0] - norm_sq).abs() < 1e-14);
        assert!(sv[1..].iter().all(|&x| x < 1e-15));
    }
}
