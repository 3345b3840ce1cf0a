//! Cyclic Jacobi eigensolver for dense Hermitian matrices.

use num_complex::Complex64;

use super::matrix::DenseMatrix;
use crate::error::{LmgError, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 60;

/// A matrix checked to be Hermitian to 1e-12 entrywise.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseHermitian {
    matrix: DenseMatrix,
}

impl DenseHermitian {
    pub fn new(matrix: DenseMatrix) -> Result<Self> {
        let defect = matrix.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(LmgError::NotHermitian(defect));
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.matrix
    }

    /// <psi| H |psi>.
    pub fn expectation(&self, psi: &[Complex64]) -> f64 {
        super::matrix::inner(psi, &self.matrix.matvec(psi)).re
    }
}

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DenseMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.eigenvectors[(i, k)]).collect()
    }

    /// V diag(eigenvalues) V^dagger.
    pub fn reconstruct(&self) -> DenseMatrix {
        let n = self.dim();
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (0..n)
                    .map(|k| {
                        self.eigenvectors[(i, k)]
                            * self.eigenvalues[k]
                            * self.eigenvectors[(j, k)].conj()
                    })
                    .sum();
            }
        }
        out
    }

    /// V exp(-i diag(eigenvalues) t) V^dagger psi0.
    pub fn evolve(&self, psi0: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
        let n = self.dim();
        if psi0.len() != n {
            return Err(LmgError::DimensionMismatch {
                expected: n,
                got: psi0.len(),
            });
        }
        if t == 0.0 {
            return Ok(psi0.to_vec());
        }
        let coeffs: Vec<Complex64> = (0..n)
            .map(|k| {
                let overlap: Complex64 = (0..n)
                    .map(|i| self.eigenvectors[(i, k)].conj() * psi0[i])
                    .sum();
                overlap * Complex64::from_polar(1.0, -self.eigenvalues[k] * t)
            })
            .collect();
        Ok((0..n)
            .map(|i| (0..n).map(|k| self.eigenvectors[(i, k)] * coeffs[k]).sum())
            .collect())
    }
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Full spectrum by cyclic complex Jacobi rotations. Each rotation first
/// removes the phase of a_pq, then applies the real symmetric rotation that
/// zeroes it.
pub fn hermitian_eigendecomposition(h: &DenseHermitian) -> Result<EigenDecomposition> {
    let n = h.dim();
    let mut a = h.matrix().clone();
    let mut v = DenseMatrix::identity(n);
    let scale = a.frobenius_norm();
    let target = 1e-14 * scale;

    let mut converged = n <= 1 || scale == 0.0;
    let mut sweep = 0;
    while !converged {
        if sweep == MAX_SWEEPS {
            return Err(LmgError::NoConvergence(MAX_SWEEPS));
        }
        sweep += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        converged = off_diagonal_norm(&a) <= target;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut eigenvectors = DenseMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            eigenvectors[(row, col)] = v[(row, src)];
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn rotate(a: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Skip entries already negligible against both diagonals.
    if r < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = Complex64::new(0.0, 0.0);
        a[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }
    let d = (apq / r).conj();
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    let n = a.dim();
    // Columns: A <- A G with G = [[c, s], [-s d, c d]] on (p, q).
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * d * s;
        a[(k, q)] = akp * s + akq * d * c;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * d * s;
        v[(k, q)] = vkp * s + vkq * d * c;
    }
    // Rows: A <- G^dagger A.
    let dc = d.conj();
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * dc * s;
        a[(q, k)] = apk * s + aqk * dc * c;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}
