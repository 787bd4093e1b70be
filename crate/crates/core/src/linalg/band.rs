//! Cholesky factorization of symmetric positive definite banded matrices.

use crate::error::{Error, Result};

use super::sparse::CsrMatrix;

/// `L Lᵀ` factor of `M − shift·I` stored row-wise within the band.
#[derive(Debug, Clone)]
pub struct BandCholesky {
    dim: usize,
    width: usize,
    // row i holds L[i][i−width ..= i] at offsets 0..=width
    rows: Vec<f64>,
}

impl BandCholesky {
    pub fn factor(m: &CsrMatrix, shift: f64) -> Result<Self> {
        let dim = m.dim();
        let w = m.bandwidth();
        let stride = w + 1;
        let mut rows = vec![0.0; dim * stride];
        // lower band of M − shift·I
        for i in 0..dim {
            for (c, v) in m.row(i) {
                if c <= i {
                    rows[i * stride + (c + w - i)] += v;
                }
            }
            rows[i * stride + w] -= shift;
        }
        for i in 0..dim {
            let i0 = i.saturating_sub(w);
            for j in i0..=i {
                let j0 = j.saturating_sub(w).max(i0);
                let mut s = rows[i * stride + (j + w - i)];
                for k in j0..j {
                    s -= rows[i * stride + (k + w - i)] * rows[j * stride + (k + w - j)];
                }
                if j == i {
                    if !(s > 0.0) {
                        return Err(Error::NotPositiveDefinite(i));
                    }
                    rows[i * stride + w] = s.sqrt();
                } else {
                    rows[i * stride + (j + w - i)] = s / rows[j * stride + w];
                }
            }
        }
        Ok(Self { dim, width: w, rows })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Solves `(M − shift·I) x = rhs` in place.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        let w = self.width;
        let stride = w + 1;
        for i in 0..self.dim {
            let i0 = i.saturating_sub(w);
            let mut s = x[i];
            for k in i0..i {
                s -= self.rows[i * stride + (k + w - i)] * x[k];
            }
            x[i] = s / self.rows[i * stride + w];
        }
        for i in (0..self.dim).rev() {
            let mut s = x[i];
            for k in i + 1..(i + w + 1).min(self.dim) {
                s -= self.rows[k * stride + (i + w - k)] * x[k];
            }
            x[i] = s / self.rows[i * stride + w];
        }
    }
}
