//! Random elements of O(p,q) via the Lie algebra: g = exp(X) with
//! X^t = -s X s, i.e. antisymmetric diagonal blocks (compact rotations) and
//! a free p x q boost block mirrored as its plain transpose.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{HsError, Result};
use crate::metric::SignatureMetric;

/// Draw g = exp(X) with boost entries uniform in [-rapidity_bound,
/// rapidity_bound] and rotation entries uniform in [-pi, pi]. Satisfies
/// g^t s g = s up to accumulated floating error.
pub fn random_group_element<R: Rng + ?Sized>(
    metric: SignatureMetric,
    rapidity_bound: f64,
    rng: &mut R,
) -> Result<DMatrix<f64>> {
    if rapidity_bound <= 0.0 {
        return Err(HsError::BadParameter {
            name: "rapidity_bound",
            value: rapidity_bound,
        });
    }
    let p = metric.p();
    let n = metric.n();
    let mut x = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let same_block = (i < p) == (j < p);
            if same_block {
                let v = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
                x[(i, j)] = v;
                x[(j, i)] = -v;
            } else {
                let v = rng.random_range(-rapidity_bound..rapidity_bound);
                x[(i, j)] = v;
                x[(j, i)] = v;
            }
        }
    }
    Ok(x.exp())
}

/// The single-boost element for signature (1,1):
/// [[cosh tau, sinh tau], [sinh tau, cosh tau]].
pub fn boost_11(tau: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[tau.cosh(), tau.sinh(), tau.sinh(), tau.cosh()])
}
