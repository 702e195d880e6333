//! Cyclic complex Jacobi eigensolver for Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the classical real Jacobi rotation, so the
//! combined 2x2 unitary zeroes `a_pq` exactly. Sweeps stop once the
//! off-diagonal Frobenius mass drops below `1e-14 * ||A||_F`.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::Result;

const OFF_DIAGONAL_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        (0..self.vectors.rows())
            .map(|i| self.vectors[(i, k)])
            .collect()
    }

    /// V f(Λ) V†.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * fv[k] * self.vectors[(j, k)].conj())
                .sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEigen> {
    a.check_hermitian()?;
    let (values, vectors) = jacobi(a, true);
    Ok(sorted(values, vectors.expect("vectors requested")))
}

/// Eigenvalues only, ascending. Skips accumulating the eigenvector basis.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    a.check_hermitian()?;
    let (mut values, _) = jacobi(a, false);
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Largest absolute eigenvalue.
pub fn operator_norm(a: &ComplexMatrix) -> Result<f64> {
    let values = hermitian_eigenvalues(a)?;
    Ok(values.iter().fold(0.0_f64, |m, l| m.max(l.abs())))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdCheck {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
}

/// PSD within `tol * max(1, ||A||)`, always reporting the smallest eigenvalue.
pub fn is_psd(a: &ComplexMatrix, tol: f64) -> Result<PsdCheck> {
    let values = hermitian_eigenvalues(a)?;
    let min = values.first().copied().unwrap_or(0.0);
    let norm = values.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    Ok(PsdCheck {
        is_psd: min >= -tol * norm.max(1.0),
        min_eigenvalue: min,
    })
}

fn sorted(values: Vec<f64>, vectors: ComplexMatrix) -> HermitianEigen {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let sorted_vectors = ComplexMatrix::from_fn(n, n, |i, k| vectors[(i, order[k])]);
    HermitianEigen {
        values: order.iter().map(|&k| values[k]).collect(),
        vectors: sorted_vectors,
    }
}

fn off_diagonal_mass(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(input: &ComplexMatrix, want_vectors: bool) -> (Vec<f64>, Option<ComplexMatrix>) {
    let n = input.rows();
    let mut work = input.clone();
    // diagonal of a Hermitian matrix is real; drop round-off imaginary parts
    for i in 0..n {
        work[(i, i)] = Complex64::new(work[(i, i)].re, 0.0);
    }
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));
    let scale = work.frobenius_norm();
    if scale == 0.0 || n < 2 {
        let values = (0..n).map(|i| work[(i, i)].re).collect();
        return (values, v);
    }
    let target = OFF_DIAGONAL_TOL * scale;
    let a = work.as_mut_slice();

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_mass(a, n) < target {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r == 0.0 || r < f64::EPSILON * 1e-3 * scale {
                    continue;
                }
                let phase = apq / r; // e^{iφ}
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // G = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] on the (p, q) plane
                let e_minus = phase.conj();
                let gpp = Complex64::new(c, 0.0);
                let gpq = Complex64::new(s, 0.0);
                let gqp = -e_minus * s;
                let gqq = e_minus * c;

                // A <- A G (columns p, q)
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * gpp + akq * gqp;
                    a[k * n + q] = akp * gpq + akq * gqq;
                }
                // A <- G† A (rows p, q)
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = gpp.conj() * apk + gqp.conj() * aqk;
                    a[q * n + k] = gpq.conj() * apk + gqq.conj() * aqk;
                }
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);
                a[p * n + p] = Complex64::new(app - t * r, 0.0);
                a[q * n + q] = Complex64::new(aqq + t * r, 0.0);

                if let Some(v) = v.as_mut() {
                    let vs = v.as_mut_slice();
                    for k in 0..n {
                        let vkp = vs[k * n + p];
                        let vkq = vs[k * n + q];
                        vs[k * n + p] = vkp * gpp + vkq * gqp;
                        vs[k * n + q] = vkp * gpq + vkq * gqq;
                    }
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i * n + i].re).collect();
    (values, v)
}
