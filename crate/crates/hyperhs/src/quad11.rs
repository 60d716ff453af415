//! Deterministic quadrature engine for the signed (1,1) integral in the
//! Thm convention: the lambda integral is Gaussian and done analytically,
//! the (xi, eta) integral runs over the two quadrants {xi, eta > 0} and
//! {xi, eta < 0} with signs +1 and -1 by tensor-product composite
//! Gauss-Legendre with O(1/sqrt(eps)) tail truncation.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::bsym::SourceMatrix;
use crate::closed_form::{b_scalars, c11, Convention};
use crate::error::{HsError, Result};
use crate::quadrature::composite_nodes;

/// Tensor-product grid parameters for the (xi, eta) plane.
#[derive(Debug, Clone, Copy)]
pub struct QuadGrid {
    /// Maximum panel length per axis.
    pub panel_len: f64,
    /// Gauss-Legendre order per panel.
    pub order: usize,
    /// Truncation length as a multiple of 1/sqrt(eps); the cutoff factor
    /// e^{-eps (eta - xi)^2} bounds the integrand in the flat direction, so
    /// 8/sqrt(eps) keeps the truncation error below 1e-12 of the peak.
    pub tail_mult: f64,
}

impl Default for QuadGrid {
    fn default() -> Self {
        Self {
            panel_len: 1.0,
            order: 12,
            tail_mult: 8.0,
        }
    }
}

/// Signed two-quadrant estimate of the regularized integral (normalization
/// constant left in; multiply by c11() for the Thm-convention identity).
pub fn quad_verify_11(a: &SourceMatrix, eps: f64, grid: &QuadGrid) -> Result<Complex64> {
    quad_11(a, eps, grid, true)
}

/// The same quadrature with the minus sign between quadrants replaced by a
/// plus; exists to exhibit the failure mode of dropping the sign.
pub fn quad_ablated_11(a: &SourceMatrix, eps: f64, grid: &QuadGrid) -> Result<Complex64> {
    quad_11(a, eps, grid, false)
}

fn quad_11(a: &SourceMatrix, eps: f64, grid: &QuadGrid, signed: bool) -> Result<Complex64> {
    if eps <= 0.0 {
        return Err(HsError::BadParameter {
            name: "eps",
            value: eps,
        });
    }
    let (b0, b1) = b_scalars(a)?;
    let b_max = b0.max(b1).max(f64::MIN_POSITIVE);
    // phase e^{-2 i b x} advances 2 b_max panel_len radians per panel; the
    // order-n rule resolves comfortably up to ~n/2 radians per panel
    let required = grid.order as f64 / (4.0 * b_max);
    if grid.panel_len > required {
        return Err(HsError::GridTooCoarse {
            panel_len: grid.panel_len,
            required,
        });
    }

    let e = a.entries();
    let tr_a = e[(0, 0)] + e[(1, 1)];
    // int e^{-2 lambda^2 - 2 i tr_a lambda} d lambda
    let lambda_factor = (PI / 2.0).sqrt() * (-tr_a * tr_a / 2.0).exp();

    let len = grid.tail_mult / eps.sqrt();
    let (xs, ws) = composite_nodes(0.0, len, grid.panel_len, grid.order);

    let quadrant = |sign: f64| -> Complex64 {
        // nodes (sign*x_i, sign*x_j); integrand
        // e^{-2 xi eta - eps (eta - xi)^2} e^{-2 i (b1 xi + b0 eta)}
        let px: Vec<Complex64> = xs
            .iter()
            .zip(&ws)
            .map(|(x, w)| {
                let xi = sign * x;
                Complex64::new(0.0, -2.0 * b1 * xi).exp() * (w * (-eps * xi * xi).exp())
            })
            .collect();
        let py: Vec<Complex64> = xs
            .iter()
            .zip(&ws)
            .map(|(x, w)| {
                let eta = sign * x;
                Complex64::new(0.0, -2.0 * b0 * eta).exp() * (w * (-eps * eta * eta).exp())
            })
            .collect();
        let mut total = Complex64::new(0.0, 0.0);
        for (i, pi) in px.iter().enumerate() {
            let xi = sign * xs[i];
            let mut row = Complex64::new(0.0, 0.0);
            for (j, pj) in py.iter().enumerate() {
                let eta = sign * xs[j];
                // remaining coupling after splitting eps(eta-xi)^2
                row += pj * (-(2.0 - 2.0 * eps) * xi * eta).exp();
            }
            total += pi * row;
        }
        total
    };

    let plus = quadrant(1.0);
    let minus = quadrant(-1.0);
    let xi_eta = if signed { plus - minus } else { plus + minus };
    Ok(lambda_factor * xi_eta)
}

/// Relative error of the normalized signed estimate against the Thm target
/// e^{-TrA^2}.
pub fn normalized_quad_error(a: &SourceMatrix, eps: f64, grid: &QuadGrid) -> Result<f64> {
    let raw = quad_verify_11(a, eps, grid)?;
    let target = Convention::Thm.target(a);
    Ok((c11() * raw - Complex64::new(target, 0.0)).norm() / target)
}
