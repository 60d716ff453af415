//! Closed-form evaluation of the signed integral for signature (1,1), plus
//! the boundary decay integral. The pipeline works in light-cone coordinates
//! where the integral factorizes into one Gaussian in lambda and one
//! oscillatory Gaussian pair in (xi, eta).

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::bsym::SourceMatrix;
use crate::error::{HsError, Result};
use crate::quadrature::adaptive_quad;

/// Normalization constant for signature (1,1): C_11 = i sqrt(2) pi^{-3/2}.
pub fn c11() -> Complex64 {
    Complex64::new(0.0, 2.0f64.sqrt() * PI.powf(-1.5))
}

/// Integrand/target convention. `Thm`: weight e^{-TrR^2 - 2i TrAR}, the
/// signed integral times C_11 targets e^{-TrA^2}. `Half`: weight
/// e^{-TrR^2/2 - i TrAR}, targets 2^{3/2} e^{-TrA^2/2}. The two are related
/// by the rescaling R -> R/sqrt(2), A -> sqrt(2) A, under which
/// I_thm(A) = 2^{-3/2} I_half(sqrt(2) A); the constant C_11 is shared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    Thm,
    Half,
}

impl Convention {
    /// The right-hand side of the identity for source matrix A.
    pub fn target(&self, a: &SourceMatrix) -> f64 {
        let tr = a.trace_a_squared();
        match self {
            Convention::Thm => (-tr).exp(),
            Convention::Half => 2.0f64.powf(1.5) * (-0.5 * tr).exp(),
        }
    }
}

/// int_R e^{-rho^2 - 2 i rho beta} rho drho = -i sqrt(pi) beta e^{-beta^2}.
pub fn gaussian_rho_integral(beta: f64) -> Complex64 {
    Complex64::new(0.0, -PI.sqrt() * beta * (-beta * beta).exp())
}

/// int_R beta e^{-beta^2} dtau with beta = (b0 e^tau + b1 e^{-tau})/2,
/// equal to sqrt(pi) e^{-b0 b1}.
pub fn gaussian_tau_integral(b0: f64, b1: f64) -> Result<f64> {
    if b0 <= 0.0 {
        return Err(HsError::BadParameter {
            name: "b0",
            value: b0,
        });
    }
    if b1 <= 0.0 {
        return Err(HsError::BadParameter {
            name: "b1",
            value: b1,
        });
    }
    Ok(PI.sqrt() * (-b0 * b1).exp())
}

/// Intermediate values of the closed-form pipeline: the lambda Gaussian, the
/// (xi, eta) factor obtained by the (rho, tau) substitution with the rho
/// integral done first, their product, and the product scaled by C_11.
#[derive(Debug, Clone)]
pub struct ClosedFormTrace {
    pub b0: f64,
    pub b1: f64,
    pub lambda_factor: Complex64,
    pub xi_eta_factor: Complex64,
    pub total: Complex64,
    pub normalized: Complex64,
}

/// Scalars b0 = (a11-a22)/2 - a12 and b1 = (a11-a22)/2 + a12; both positive
/// exactly when A s is positive definite at signature (1,1).
pub fn b_scalars(a: &SourceMatrix) -> Result<(f64, f64)> {
    let m = a.metric();
    if m.p() != 1 || m.q() != 1 {
        return Err(HsError::NotSignature11 { p: m.p(), q: m.q() });
    }
    let e = a.entries();
    let half = 0.5 * (e[(0, 0)] - e[(1, 1)]);
    Ok((half - e[(0, 1)], half + e[(0, 1)]))
}

/// Closed form of the signed (1,1) integral in the Half convention:
/// C_11 * total = 2^{3/2} e^{-TrA^2/2}.
pub fn closed_form_i11(a: &SourceMatrix) -> Result<ClosedFormTrace> {
    let (b0, b1) = b_scalars(a)?;
    let e = a.entries();
    let tr_a = e[(0, 0)] + e[(1, 1)];
    let lambda_factor = Complex64::new(PI.sqrt() * (-tr_a * tr_a / 4.0).exp(), 0.0);
    // the rho integral contributes -i sqrt(pi) beta e^{-beta^2}; the tau
    // integral then collapses the remaining beta profile
    let xi_eta_factor =
        Complex64::new(0.0, -2.0 * PI.sqrt()) * gaussian_tau_integral(b0, b1)?;
    let total = lambda_factor * xi_eta_factor;
    let normalized = c11() * total;
    Ok(ClosedFormTrace {
        b0,
        b1,
        lambda_factor,
        xi_eta_factor,
        total,
        normalized,
    })
}

/// The regularized boundary integral int_R e^{-eps eta^2 - 2 i b eta} d eta.
/// Returns the analytic value e^{-b^2/eps} sqrt(pi/eps) together with an
/// adaptive-quadrature evaluation for comparison. The numeric column is
/// meaningless below double-precision underflow of the analytic value;
/// callers should compare only when the analytic value is representable.
pub fn boundary_eta_integral(eps: f64, b: f64) -> Result<(f64, Complex64)> {
    if eps <= 0.0 {
        return Err(HsError::BadParameter {
            name: "eps",
            value: eps,
        });
    }
    if b == 0.0 {
        return Err(HsError::BadParameter { name: "b", value: b });
    }
    let analytic = (-b * b / eps).exp() * (PI / eps).sqrt();
    let half_width = 10.0 / eps.sqrt();
    let f = |eta: f64| Complex64::new(0.0, -2.0 * b * eta).exp() * (-eps * eta * eta).exp();
    let numeric = adaptive_quad(&f, -half_width, half_width, 1e-13 * analytic.max(1e-30));
    Ok((analytic, numeric))
}
