//! Small dense complex Hermitian matrices: rank-one accumulation, Cholesky
//! factorization, log-determinants and linear solves. Dimensions here are
//! antenna counts (a few dozen at most), so plain `O(d³)` routines are fine.

#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is not positive definite (pivot {pivot} at column {col})")]
    NotPositiveDefinite { col: usize, pivot: f64 },
    #[error("dimension mismatch: matrix is {dim}x{dim}, vector has length {len}")]
    DimensionMismatch { dim: usize, len: usize },
}

/// Hermitian matrix in dense row-major storage. Only the caller-supplied
/// updates keep it Hermitian; the constructors below start from `s·I`.
#[derive(Debug, Clone)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn scaled_identity(dim: usize, scale: f64) -> Self {
        let mut data = vec![Complex64::ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(scale, 0.0);
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    /// `A += weight · v v†`.
    pub fn add_rank_one(&mut self, v: &[Complex64], weight: f64) {
        debug_assert_eq!(v.len(), self.dim);
        for i in 0..self.dim {
            let vi = v[i] * weight;
            let row = i * self.dim;
            for j in 0..self.dim {
                self.data[row + j] += vi * v[j].conj();
            }
        }
    }

    /// Lower-triangular Cholesky factor `L` with `A = L L†`.
    pub fn cholesky(&self) -> Result<Cholesky, LinalgError> {
        let d = self.dim;
        let mut l = vec![Complex64::ZERO; d * d];
        for j in 0..d {
            let mut diag = self.get(j, j).re;
            for k in 0..j {
                diag -= l[j * d + k].norm_sqr();
            }
            if diag <= 0.0 || !diag.is_finite() {
                return Err(LinalgError::NotPositiveDefinite { col: j, pivot: diag });
            }
            let ljj = diag.sqrt();
            l[j * d + j] = Complex64::new(ljj, 0.0);
            for i in (j + 1)..d {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l[i * d + k] * l[j * d + k].conj();
                }
                l[i * d + j] = s / ljj;
            }
        }
        Ok(Cholesky { dim: d, l })
    }
}

/// Cholesky factorization of a positive-definite Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Cholesky {
    dim: usize,
    l: Vec<Complex64>,
}

impl Cholesky {
    /// `log2 det A = 2 Σ log2 L_jj`.
    pub fn log2_det(&self) -> f64 {
        let mut acc = 0.0;
        for j in 0..self.dim {
            acc += self.l[j * self.dim + j].re.log2();
        }
        2.0 * acc
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        let d = self.dim;
        if b.len() != d {
            return Err(LinalgError::DimensionMismatch { dim: d, len: b.len() });
        }
        // Forward: L y = b.
        let mut y = b.to_vec();
        for i in 0..d {
            for k in 0..i {
                let lik = self.l[i * d + k];
                y[i] = y[i] - lik * y[k];
            }
            y[i] /= self.l[i * d + i];
        }
        // Backward: L† x = y.
        for i in (0..d).rev() {
            for k in (i + 1)..d {
                let lki = self.l[k * d + i].conj();
                y[i] = y[i] - lki * y[k];
            }
            y[i] /= self.l[i * d + i];
        }
        Ok(y)
    }

    /// Real quadratic form `v† A⁻¹ v`.
    pub fn quad_form_inv(&self, v: &[Complex64]) -> Result<f64, LinalgError> {
        let x = self.solve(v)?;
        let s: Complex64 = v.iter().zip(&x).map(|(a, b)| a.conj() * b).sum();
        Ok(s.re)
    }
}
