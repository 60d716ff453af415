//! Diagnostic tracer for boundary collisions: classify R(t) = (1-t) R0 +
//! t R1 along a uniform grid and report where the path first leaves the
//! starting domain. Near a generic crossing exactly two eigenvalues of
//! opposite type collide and the B-norms of their eigenvectors decay.

use crate::bsym::BSymMatrix;
use crate::classify::{spectral_classify, SpectrumClassification};
use crate::error::{HsError, Result};
use crate::motif::Motif;

#[derive(Debug, Clone)]
pub struct PathPoint {
    pub t: f64,
    pub classification: SpectrumClassification,
}

impl PathPoint {
    pub fn motif(&self) -> Option<&Motif> {
        self.classification.as_diagonalizable().map(|d| &d.motif)
    }

    /// Smallest eigenvector |B(v,v)|; the quantity that decays toward a
    /// cross-type collision.
    pub fn min_bnorm(&self) -> Option<f64> {
        self.classification
            .as_diagonalizable()
            .map(|d| d.bnorms.iter().cloned().fold(f64::INFINITY, f64::min))
    }
}

#[derive(Debug, Clone)]
pub struct CollisionTrace {
    pub points: Vec<PathPoint>,
    /// First grid interval (t_k, t_{k+1}) on which the classification stops
    /// being Diagonalizable-with-the-starting-motif, if any.
    pub first_crossing: Option<(f64, f64)>,
}

pub fn trace_collision_path(
    r0: &BSymMatrix,
    r1: &BSymMatrix,
    steps: usize,
    tol: f64,
) -> Result<CollisionTrace> {
    if steps < 2 {
        return Err(HsError::BadParameter {
            name: "steps",
            value: steps as f64,
        });
    }
    if r0.metric() != r1.metric() {
        return Err(HsError::DimensionMismatch {
            expected: r0.metric().n(),
            got: r1.metric().n(),
        });
    }
    let metric = r0.metric();
    let start = spectral_classify(r0, tol)?;
    let Some(start_motif) = start.as_diagonalizable().map(|d| d.motif.clone()) else {
        return Err(HsError::BadSpectralArgs {
            reason: "path start point is not diagonalizable".into(),
        });
    };

    let mut points = Vec::with_capacity(steps + 1);
    let mut first_crossing = None;
    for k in 0..=steps {
        let t = k as f64 / steps as f64;
        let entries = r0.entries() * (1.0 - t) + r1.entries() * t;
        let r = BSymMatrix::from_entries(metric, entries)
            .expect("convex combination preserves B-symmetry");
        let classification = spectral_classify(&r, tol)?;
        let in_start_domain = classification
            .as_diagonalizable()
            .is_some_and(|d| d.motif == start_motif);
        if !in_start_domain && first_crossing.is_none() && k > 0 {
            let prev = (k - 1) as f64 / steps as f64;
            first_crossing = Some((prev, t));
        }
        points.push(PathPoint { t, classification });
    }
    Ok(CollisionTrace {
        points,
        first_crossing,
    })
}
