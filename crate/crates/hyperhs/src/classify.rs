//! O(p,q)-diagonalizability classification of B-symmetric matrices.
//!
//! The eigensystem of R is generally non-symmetric: eigenvalues may come in
//! complex pairs, and real eigenvectors may become B-null at the domain
//! boundary. A matrix is classified `Diagonalizable` only when all
//! eigenvalues are real, every eigenvector has B-norm bounded away from
//! zero, the space/time counts match the signature, no cross-type pair of
//! eigenvalues is closer than the tolerance, and the assembled transform
//! reproduces R.

use nalgebra::{DMatrix, DVector};

use crate::bsym::BSymMatrix;
use crate::error::{HsError, Result};
use crate::metric::SignatureMetric;
use crate::motif::{EigenType, Motif};

pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;

/// Why a matrix was assigned to the (measure-zero) boundary rather than to a
/// domain D_sigma.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryReason {
    /// A space-like and a time-like eigenvalue closer than the tolerance.
    CrossTypeEigenvalueTie,
    /// An eigenvector with |B(v,v)| below the tolerance after Euclidean
    /// normalization.
    SmallBNorm,
    /// The B-normalized eigenbasis fails to reconstruct R; treated as
    /// boundary rather than silently passed.
    IllConditioned,
}

/// Eigen-data of a diagonalizable matrix.
#[derive(Debug, Clone)]
pub struct DiagonalizableSpectrum {
    /// All eigenvalues sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Space/time type per sorted eigenvalue.
    pub types: Vec<EigenType>,
    /// |B(v,v)| of the Euclidean-unit eigenvector per sorted eigenvalue; a
    /// boundary-proximity diagnostic (these decay at cross-type collisions).
    pub bnorms: Vec<f64>,
    /// The motif read off the sorted type sequence.
    pub motif: Motif,
    /// g in O(p,q): space-like eigenvector columns first (descending
    /// eigenvalue), then time-like (descending); columns B-normalized to
    /// B(v,v) = +-1.
    pub transform: DMatrix<f64>,
}

impl DiagonalizableSpectrum {
    /// The eigenvalues reordered to match the columns of `transform`
    /// (space block first, then time block, each descending).
    pub fn eigenvalues_in_transform_order(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .eigenvalues
            .iter()
            .zip(&self.types)
            .filter(|(_, t)| **t == EigenType::Space)
            .map(|(l, _)| *l)
            .collect();
        out.extend(
            self.eigenvalues
                .iter()
                .zip(&self.types)
                .filter(|(_, t)| **t == EigenType::Time)
                .map(|(l, _)| *l),
        );
        out
    }
}

#[derive(Debug, Clone)]
pub enum SpectrumClassification {
    Diagonalizable(DiagonalizableSpectrum),
    Boundary { reason: BoundaryReason },
    NonDiagonalizable { complex_pair_count: usize },
}

impl SpectrumClassification {
    pub fn is_diagonalizable(&self) -> bool {
        matches!(self, Self::Diagonalizable(_))
    }

    pub fn as_diagonalizable(&self) -> Option<&DiagonalizableSpectrum> {
        match self {
            Self::Diagonalizable(d) => Some(d),
            _ => None,
        }
    }
}

/// Classify a B-symmetric matrix. A single `tol` governs the reality test on
/// eigenvalue imaginary parts, the eigenvector B-norm floor, and the
/// cross-type eigenvalue gap.
pub fn spectral_classify(r: &BSymMatrix, tol: f64) -> Result<SpectrumClassification> {
    if tol <= 0.0 {
        return Err(HsError::BadParameter {
            name: "tol",
            value: tol,
        });
    }
    let metric = r.metric();
    let n = metric.n();
    let scale = r.entries().amax().max(1.0);

    // bounded QR iteration: with an unlimited budget the iteration can spin
    // forever on near-defective inputs, which sit on the domain boundary
    // anyway; treat non-convergence as a boundary point
    let max_niter = 100 * n.max(2);
    let Some(schur) = nalgebra::linalg::Schur::try_new(r.entries().clone(), f64::EPSILON, max_niter)
    else {
        return Ok(SpectrumClassification::Boundary {
            reason: BoundaryReason::IllConditioned,
        });
    };
    let complex_eigs = schur.complex_eigenvalues();

    let n_complex = complex_eigs
        .iter()
        .filter(|z| z.im.abs() >= tol * scale)
        .count();
    if n_complex > 0 {
        return Ok(SpectrumClassification::NonDiagonalizable {
            complex_pair_count: n_complex / 2,
        });
    }

    let mut lambdas: Vec<f64> = complex_eigs.iter().map(|z| z.re).collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());

    // group coincident eigenvalues so repeated (same-type) eigenvalues get a
    // full eigenspace basis from one nullspace computation
    let mut eigenpairs: Vec<(f64, DVector<f64>)> = Vec::with_capacity(n);
    let mut i = 0;
    while i < lambdas.len() {
        let mut j = i + 1;
        while j < lambdas.len() && (lambdas[i] - lambdas[j]).abs() <= tol * scale {
            j += 1;
        }
        let mult = j - i;
        let lambda = lambdas[i..j].iter().sum::<f64>() / mult as f64;
        let vectors = nullspace_vectors(r.entries(), lambda, mult);
        // residual check: a defective matrix yields spurious "nullspace"
        // vectors with large residual
        for v in &vectors {
            let resid = (r.entries() * v - lambda * v).amax();
            if resid > 1e-6 * scale {
                return Ok(SpectrumClassification::Boundary {
                    reason: BoundaryReason::IllConditioned,
                });
            }
        }
        for v in vectors {
            eigenpairs.push((lambda, v));
        }
        i = j;
    }

    // B-orthogonalize within repeated eigenvalues and type the eigenvectors
    let mut typed: Vec<(f64, EigenType, f64, DVector<f64>)> = Vec::with_capacity(n);
    let mut k = 0;
    while k < eigenpairs.len() {
        let lambda = eigenpairs[k].0;
        let mut group: Vec<DVector<f64>> = Vec::new();
        let mut k2 = k;
        while k2 < eigenpairs.len() && eigenpairs[k2].0 == lambda {
            group.push(eigenpairs[k2].1.clone());
            k2 += 1;
        }
        // Gram-Schmidt with respect to B inside the eigenspace
        let mut basis: Vec<(f64, DVector<f64>)> = Vec::new(); // (B(v,v) of unit v, B-normalized v)
        for mut v in group {
            for (bsign, w) in &basis {
                let c = bform(&metric, &v, w) * bsign.signum();
                v -= w * c;
            }
            let norm = v.norm();
            if norm < tol {
                return Ok(SpectrumClassification::Boundary {
                    reason: BoundaryReason::SmallBNorm,
                });
            }
            v /= norm;
            let b = bform(&metric, &v, &v);
            if b.abs() <= tol {
                return Ok(SpectrumClassification::Boundary {
                    reason: BoundaryReason::SmallBNorm,
                });
            }
            let w = &v / b.abs().sqrt();
            basis.push((b, w));
        }
        for (b, w) in basis {
            let ty = if b > 0.0 {
                EigenType::Space
            } else {
                EigenType::Time
            };
            typed.push((lambda, ty, b.abs(), w));
        }
        k = k2;
    }

    let n_space = typed
        .iter()
        .filter(|(_, t, _, _)| *t == EigenType::Space)
        .count();
    if n_space != metric.p() {
        // wrong inertia without a small B-norm can only happen very close to
        // the boundary where typing is unreliable
        return Ok(SpectrumClassification::Boundary {
            reason: BoundaryReason::SmallBNorm,
        });
    }

    // cross-type gap
    for a in &typed {
        for b in &typed {
            if a.1 == EigenType::Space
                && b.1 == EigenType::Time
                && (a.0 - b.0).abs() <= tol * scale
            {
                return Ok(SpectrumClassification::Boundary {
                    reason: BoundaryReason::CrossTypeEigenvalueTie,
                });
            }
        }
    }

    // assemble g: space block first (descending), then time block (descending)
    let mut space: Vec<&(f64, EigenType, f64, DVector<f64>)> = typed
        .iter()
        .filter(|(_, t, _, _)| *t == EigenType::Space)
        .collect();
    let mut time: Vec<&(f64, EigenType, f64, DVector<f64>)> = typed
        .iter()
        .filter(|(_, t, _, _)| *t == EigenType::Time)
        .collect();
    space.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    time.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

    let mut g = DMatrix::zeros(n, n);
    let mut lam_order: Vec<f64> = Vec::with_capacity(n);
    for (col, entry) in space.iter().chain(time.iter()).enumerate() {
        let mut v = entry.3.clone();
        // deterministic overall sign: largest-magnitude component positive
        let imax = v.iter().enumerate().fold(0, |acc, (idx, x)| {
            if x.abs() > v[acc].abs() {
                idx
            } else {
                acc
            }
        });
        if v[imax] < 0.0 {
            v = -v;
        }
        g.set_column(col, &v);
        lam_order.push(entry.0);
    }

    // reconstruction check: g diag(lambda) g^{-1} must reproduce R
    let lam_mat = DMatrix::from_fn(n, n, |i, j| if i == j { lam_order[i] } else { 0.0 });
    let g_inv = match g.clone().try_inverse() {
        Some(inv) => inv,
        None => {
            return Ok(SpectrumClassification::Boundary {
                reason: BoundaryReason::IllConditioned,
            })
        }
    };
    let recon = &g * lam_mat * g_inv;
    if (recon - r.entries()).amax() > 1e-8 * scale {
        return Ok(SpectrumClassification::Boundary {
            reason: BoundaryReason::IllConditioned,
        });
    }

    // sorted (descending) merged view with deterministic same-type ordering
    let mut merged: Vec<(f64, EigenType, f64)> =
        typed.iter().map(|(l, t, b, _)| (*l, *t, *b)).collect();
    merged.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let eigenvalues: Vec<f64> = merged.iter().map(|e| e.0).collect();
    let types: Vec<EigenType> = merged.iter().map(|e| e.1).collect();
    let bnorms: Vec<f64> = merged.iter().map(|e| e.2).collect();
    let motif = Motif::new(types.clone(), metric)?;

    Ok(SpectrumClassification::Diagonalizable(
        DiagonalizableSpectrum {
            eigenvalues,
            types,
            bnorms,
            motif,
            transform: g,
        },
    ))
}

fn bform(metric: &SignatureMetric, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
    (0..metric.n()).map(|i| metric.sign(i) * u[i] * v[i]).sum()
}

/// The `count` right singular vectors of (R - lambda I) with the smallest
/// singular values: a numerical nullspace basis.
fn nullspace_vectors(r: &DMatrix<f64>, lambda: f64, count: usize) -> Vec<DVector<f64>> {
    let n = r.nrows();
    let shifted = r - DMatrix::<f64>::identity(n, n) * lambda;
    let svd = nalgebra::linalg::SVD::new(shifted, false, true);
    let v_t = svd.v_t.expect("requested V^t");
    // singular values are sorted descending; nullspace = last rows of V^t
    (0..count)
        .map(|k| v_t.row(n - 1 - k).transpose())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bsym::BSymMatrix;
    use crate::metric::make_metric;
    use approx::assert_relative_eq;

    fn m11() -> SignatureMetric {
        make_metric(1, 1).unwrap()
    }

    fn classify11(r11: f64, r12: f64, r22: f64) -> SpectrumClassification {
        let r = BSymMatrix::from_upper_triangle(m11(), &[r11, r12, r22]);
        spectral_classify(&r, DEFAULT_CLASSIFY_TOL).unwrap()
    }

    #[test]
    fn diagonal_input() {
        let c = classify11(2.0, 0.0, 0.0);
        let d = c.as_diagonalizable().expect("diagonalizable");
        assert_eq!(d.eigenvalues, vec![2.0, 0.0]);
        assert_eq!(d.types, vec![EigenType::Space, EigenType::Time]);
        assert_eq!(d.motif.to_string(), "•◦");
    }

    #[test]
    fn rotation_like_input_not_diagonalizable() {
        // R = [[0,1],[-1,0]]: eigenvalues +-i, xi*eta = -1 < 0
        let c = classify11(0.0, 1.0, 0.0);
        match c {
            SpectrumClassification::NonDiagonalizable { complex_pair_count } => {
                assert_eq!(complex_pair_count, 1)
            }
            other => panic!("expected NonDiagonalizable, got {other:?}"),
        }
    }

    #[test]
    fn derived_quadratic_example() {
        // R = [[3,1],[-1,0]]: lambda^2 - 3 lambda - (0*3 - 1*(-1))... the
        // characteristic polynomial is lambda^2 - 3 lambda + 1, with roots
        // 1.5 +- sqrt(1.25) (independent quadratic solve as oracle).
        let c = classify11(3.0, 1.0, 0.0);
        let d = c.as_diagonalizable().expect("diagonalizable");
        let disc = (3.0f64 / 2.0) * (3.0 / 2.0) - 1.0; // (tr/2)^2 - det
        let hi = 1.5 + disc.sqrt();
        let lo = 1.5 - disc.sqrt();
        assert_relative_eq!(d.eigenvalues[0], hi, epsilon = 1e-12);
        assert_relative_eq!(d.eigenvalues[1], lo, epsilon = 1e-12);
        assert_eq!(d.motif.to_string(), "•◦");
    }

    #[test]
    fn transform_is_in_opq_and_reconstructs() {
        let m = make_metric(1, 2).unwrap();
        let r = BSymMatrix::from_upper_triangle(m, &[2.0, 0.3, -0.2, 0.5, 0.1, -1.0]);
        let c = spectral_classify(&r, DEFAULT_CLASSIFY_TOL).unwrap();
        let d = c.as_diagonalizable().expect("diagonalizable");
        let g = &d.transform;
        let s = m.s_matrix();
        let gtsg = g.transpose() * &s * g;
        assert_relative_eq!((gtsg - &s).amax(), 0.0, epsilon = 1e-9);
        let lam = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
            d.eigenvalues_in_transform_order(),
        ));
        let recon = g * lam * g.clone().try_inverse().unwrap();
        assert_relative_eq!((recon - r.entries()).amax(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn boundary_detected_at_xi_zero() {
        // (lambda, xi, eta) = (1, 0, 2): on the boundary plane xi = 0
        let c = classify11(2.0, 1.0, 0.0);
        assert!(
            matches!(c, SpectrumClassification::Boundary { .. }),
            "got {c:?}"
        );
    }

    #[test]
    fn repeated_same_type_eigenvalues_allowed() {
        // diag(2, 2, 1) at (2,1): repeated space-like eigenvalue
        let m = make_metric(2, 1).unwrap();
        let r = BSymMatrix::from_upper_triangle(m, &[2.0, 0.0, 0.0, 2.0, 0.0, 1.0]);
        let c = spectral_classify(&r, DEFAULT_CLASSIFY_TOL).unwrap();
        let d = c.as_diagonalizable().expect("diagonalizable");
        assert_eq!(d.motif.to_string(), "••◦");
    }
}
