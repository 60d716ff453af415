//! B-symmetric matrices R = s R^t s, source matrices A with A*s > 0, the
//! regularizing cutoff, and light-cone coordinates for signature (1,1).

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{HsError, Result};
use crate::metric::SignatureMetric;

/// A real (p+q)x(p+q) matrix satisfying R = s R^t s exactly. In block form
/// the diagonal blocks are symmetric and the lower-left block equals minus
/// the transpose of the upper-right block.
#[derive(Debug, Clone, PartialEq)]
pub struct BSymMatrix {
    metric: SignatureMetric,
    entries: DMatrix<f64>,
}

impl BSymMatrix {
    /// Assemble from blocks: symmetric pxp, symmetric qxq, arbitrary pxq.
    /// The symmetry of the diagonal blocks is checked entrywise and exactly.
    pub fn from_blocks(
        metric: SignatureMetric,
        pp: &DMatrix<f64>,
        qq: &DMatrix<f64>,
        pq: &DMatrix<f64>,
    ) -> Result<Self> {
        let (p, q) = (metric.p(), metric.q());
        check_shape(pp, p, p)?;
        check_shape(qq, q, q)?;
        check_shape(pq, p, q)?;
        check_exact_symmetric(pp)?;
        check_exact_symmetric(qq)?;
        let n = p + q;
        let mut m = DMatrix::zeros(n, n);
        m.view_mut((0, 0), (p, p)).copy_from(pp);
        m.view_mut((p, p), (q, q)).copy_from(qq);
        m.view_mut((0, p), (p, q)).copy_from(pq);
        m.view_mut((p, 0), (q, p)).copy_from(&(-pq.transpose()));
        Ok(Self { metric, entries: m })
    }

    /// Validate a full matrix against R = s R^t s (exact entrywise check).
    pub fn from_entries(metric: SignatureMetric, entries: DMatrix<f64>) -> Result<Self> {
        let n = metric.n();
        if entries.nrows() != n || entries.ncols() != n {
            return Err(HsError::DimensionMismatch {
                expected: n,
                got: entries.nrows().max(entries.ncols()),
            });
        }
        let mut residual = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let want = metric.sign(i) * entries[(j, i)] * metric.sign(j);
                let r = (entries[(i, j)] - want).abs();
                residual = residual.max(r);
            }
        }
        if residual != 0.0 {
            return Err(HsError::SymmetryViolation { residual });
        }
        Ok(Self { metric, entries })
    }

    /// Build directly from the free parameters: the upper triangle (including
    /// the diagonal) determines the rest. Intended for samplers.
    pub fn from_upper_triangle(metric: SignatureMetric, upper: &[f64]) -> Self {
        let n = metric.n();
        debug_assert_eq!(upper.len(), n * (n + 1) / 2);
        let mut m = DMatrix::zeros(n, n);
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                m[(i, j)] = upper[k];
                if i != j {
                    // same block: symmetric; cross block: antisymmetric
                    m[(j, i)] = if (i < metric.p()) == (j < metric.p()) {
                        upper[k]
                    } else {
                        -upper[k]
                    };
                }
                k += 1;
            }
        }
        Self { metric, entries: m }
    }

    /// Project a nearly B-symmetric matrix onto the symmetry by averaging
    /// with s M^t s; returns the projection and the max deviation removed.
    /// Intended for conjugation results, which satisfy the relation only up
    /// to floating error.
    pub fn from_entries_projected(
        metric: SignatureMetric,
        entries: &DMatrix<f64>,
    ) -> (Self, f64) {
        let s = metric.s_matrix();
        let mirrored = &s * entries.transpose() * &s;
        let residual = (entries - &mirrored).amax();
        let projected = (entries + mirrored) * 0.5;
        (
            Self {
                metric,
                entries: projected,
            },
            residual,
        )
    }

    pub fn metric(&self) -> SignatureMetric {
        self.metric
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Frobenius norm square of the off-diagonal p x q block.
    pub fn offdiag_norm_sq(&self) -> f64 {
        let (p, q) = (self.metric.p(), self.metric.q());
        self.entries
            .view((0, p), (p, q))
            .iter()
            .map(|x| x * x)
            .sum()
    }

    /// Tr R^2 evaluated directly on the entries.
    pub fn trace_r_squared(&self) -> f64 {
        let n = self.metric.n();
        let mut t = 0.0;
        for i in 0..n {
            for j in 0..n {
                t += self.entries[(i, j)] * self.entries[(j, i)];
            }
        }
        t
    }

    /// Tr(R^t R) = Tr R^2 + 4 ||R_{p,q}||_F^2 for B-symmetric R.
    pub fn trace_rt_r(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum()
    }

    /// Tr(A R) against another matrix of the same dimension.
    pub fn trace_product(&self, other: &DMatrix<f64>) -> f64 {
        let n = self.metric.n();
        let mut t = 0.0;
        for i in 0..n {
            for j in 0..n {
                t += other[(i, j)] * self.entries[(j, i)];
            }
        }
        t
    }
}

fn check_shape(m: &DMatrix<f64>, rows: usize, cols: usize) -> Result<()> {
    if m.nrows() != rows || m.ncols() != cols {
        return Err(HsError::BlockShape {
            expected_rows: rows,
            expected_cols: cols,
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

fn check_exact_symmetric(m: &DMatrix<f64>) -> Result<()> {
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            let r = (m[(i, j)] - m[(j, i)]).abs();
            if r != 0.0 {
                return Err(HsError::SymmetryViolation { residual: r });
            }
        }
    }
    Ok(())
}

/// The cutoff chi_eps(R) = exp(-(eps/2) Tr(sR - Rs)^2). For B-symmetric R
/// the trace reduces to 8 ||R_{p,q}||_F^2, so the value is
/// exp(-4 eps ||R_{p,q}||_F^2).
pub fn cutoff_chi(r: &BSymMatrix, eps: f64) -> Result<f64> {
    if eps <= 0.0 {
        return Err(HsError::BadParameter {
            name: "eps",
            value: eps,
        });
    }
    Ok((-4.0 * eps * r.offdiag_norm_sq()).exp())
}

/// Tr(sR - Rs)^2 evaluated directly from the definition; the oracle for the
/// block reduction used by `cutoff_chi`.
pub fn commutator_trace_sq(r: &BSymMatrix) -> f64 {
    let s = r.metric().s_matrix();
    let c = &s * r.entries() - r.entries() * &s;
    (&c * &c).trace()
}

/// The source matrix A of the transformation: B-symmetric with A*s symmetric
/// positive definite, the condition for the identity to hold.
/// `positivity_margin` is the
/// smallest eigenvalue of A*s.
#[derive(Debug, Clone)]
pub struct SourceMatrix {
    inner: BSymMatrix,
    positivity_margin: f64,
}

pub const DEFAULT_POSITIVITY_TOL: f64 = 1e-12;

impl SourceMatrix {
    pub fn new(metric: SignatureMetric, entries: DMatrix<f64>) -> Result<Self> {
        Self::with_tol(metric, entries, DEFAULT_POSITIVITY_TOL)
    }

    pub fn with_tol(metric: SignatureMetric, entries: DMatrix<f64>, tol: f64) -> Result<Self> {
        let inner = BSymMatrix::from_entries(metric, entries)?;
        let margin = positivity_margin(&inner);
        if margin <= tol {
            return Err(HsError::NotPositive { margin });
        }
        Ok(Self {
            inner,
            positivity_margin: margin,
        })
    }

    pub fn metric(&self) -> SignatureMetric {
        self.inner.metric()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        self.inner.entries()
    }

    pub fn as_bsym(&self) -> &BSymMatrix {
        &self.inner
    }

    pub fn positivity_margin(&self) -> f64 {
        self.positivity_margin
    }

    pub fn trace_a_squared(&self) -> f64 {
        self.inner.trace_r_squared()
    }
}

/// Smallest eigenvalue of the symmetric matrix A*s.
pub fn positivity_margin(a: &BSymMatrix) -> f64 {
    let s = a.metric().s_matrix();
    let asym = a.entries() * s;
    let eig = SymmetricEigen::new(asym);
    eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Light-cone coordinates for signature (1,1): R e_+ = lambda e_+ + eta e_-,
/// R e_- = lambda e_- + xi e_+ with null vectors e_+- = (1, +-1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LightconeCoords {
    pub lambda: f64,
    pub xi: f64,
    pub eta: f64,
}

impl LightconeCoords {
    pub fn from_matrix(r: &BSymMatrix) -> Result<Self> {
        let m = r.metric();
        if m.p() != 1 || m.q() != 1 {
            return Err(HsError::NotSignature11 { p: m.p(), q: m.q() });
        }
        let e = r.entries();
        Ok(Self::from_parts(e[(0, 0)], e[(0, 1)], e[(1, 1)]))
    }

    pub fn from_parts(r11: f64, r12: f64, r22: f64) -> Self {
        let half = 0.5 * (r11 - r22);
        Self {
            lambda: 0.5 * (r11 + r22),
            xi: half - r12,
            eta: half + r12,
        }
    }

    /// Inverse map; reconstructs the matrix entries exactly.
    pub fn to_matrix(&self) -> BSymMatrix {
        let metric = SignatureMetric::new(1, 1).expect("(1,1) is valid");
        let half = 0.5 * (self.eta + self.xi);
        let r11 = self.lambda + half;
        let r22 = self.lambda - half;
        let r12 = 0.5 * (self.eta - self.xi);
        BSymMatrix::from_upper_triangle(metric, &[r11, r12, r22])
    }
}
