//! The signature metric s = diag(Id_p, -Id_q) and the bilinear form B(u,v) = u^t s v.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{HsError, Result};

/// Signature (p,q) of the indefinite bilinear form, p space-like and q
/// time-like directions. Both counts must be positive; the compact cases
/// p = 0 or q = 0 carry no hyperbolic structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureMetric {
    p: usize,
    q: usize,
}

impl SignatureMetric {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(HsError::DegenerateSignature { p, q });
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Total dimension n = p + q.
    pub fn n(&self) -> usize {
        self.p + self.q
    }

    /// Diagonal entry s_i: +1 for i < p, -1 otherwise.
    pub fn sign(&self, i: usize) -> f64 {
        if i < self.p {
            1.0
        } else {
            -1.0
        }
    }

    /// The metric as a dense diagonal matrix.
    pub fn s_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n(), self.n(), |i, j| {
            if i == j {
                self.sign(i)
            } else {
                0.0
            }
        })
    }

    /// B(u,v) = sum_{i<p} u_i v_i - sum_{j>=p} u_j v_j.
    pub fn bform(&self, u: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
        let n = self.n();
        if u.len() != n {
            return Err(HsError::DimensionMismatch {
                expected: n,
                got: u.len(),
            });
        }
        if v.len() != n {
            return Err(HsError::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        Ok((0..n).map(|i| self.sign(i) * u[i] * v[i]).sum())
    }

    /// B-norm square B(v,v) of a slice-backed vector, for callers holding
    /// matrix columns.
    pub fn bnorm_sq(&self, v: &DVector<f64>) -> f64 {
        (0..self.n()).map(|i| self.sign(i) * v[i] * v[i]).sum()
    }
}

/// Convenience constructor mirroring the operation name used throughout.
pub fn make_metric(p: usize, q: usize) -> Result<SignatureMetric> {
    SignatureMetric::new(p, q)
}
