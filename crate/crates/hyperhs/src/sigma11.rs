//! Sigma-model integral representation of F(z) for signature (1,1): the
//! signed two-quadrant integral of e^{-(N/2b^2) TrR^2} det(z - R)^{-N/2} in
//! light-cone coordinates, restricted to even N so the determinant power is
//! an integer and branch-free. The overall constant is not computed;
//! consumers compare ratios across z, which is also how the Monte Carlo
//! comparison is formulated.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{HsError, Result};
use crate::goe::{f_weight, goe_sample, GOEConfig, SpectralArgs};
use crate::quadrature::{composite_nodes, gauss_legendre_on};
use crate::seeding::derive_subseed;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Quadrature parameters for the sigma-model integral.
#[derive(Debug, Clone, Copy)]
pub struct SigmaQuad {
    /// Truncation radius of the (xi, eta) quadrants. The integrand decays
    /// only algebraically (like radius^{-N/2}) along the axes, so the
    /// default is generous.
    pub radius: f64,
    /// Gauss-Legendre order per panel.
    pub order: usize,
    /// Panel length of the lambda integral.
    pub lambda_panel: f64,
}

impl Default for SigmaQuad {
    fn default() -> Self {
        Self {
            radius: 24.0,
            order: 12,
            lambda_panel: 0.25,
        }
    }
}

/// Geometrically graded panel mesh on (0, radius]: the integrand varies on
/// the scale b^2/(N * radius) near the axes, so panel edges double from one
/// e-fold of the sharpest decay up to the radius.
fn graded_axis(radius: f64, sharpest_scale: f64, order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut edges = vec![0.0, sharpest_scale.min(radius)];
    while *edges.last().unwrap() < radius {
        let next = (edges.last().unwrap() * 2.0).min(radius);
        edges.push(next);
    }
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for w in edges.windows(2) {
        let (xs, ws) = gauss_legendre_on(order, w[0], w[1]);
        nodes.extend(xs);
        weights.extend(ws);
    }
    (nodes, weights)
}

/// Signed quadrature estimate of the sigma-model integral, constant left in.
pub fn sigma_rep_f11(args: &SpectralArgs, cfg: &GOEConfig, quad: &SigmaQuad) -> Result<Complex64> {
    let m = args.metric();
    if m.p() != 1 || m.q() != 1 {
        return Err(HsError::NotSignature11 { p: m.p(), q: m.q() });
    }
    if cfg.n % 2 != 0 {
        return Err(HsError::OddN { n: cfg.n });
    }
    // operational threshold for dropping the cutoff: the determinant factor
    // must decay fast enough to make the un-regularized integral absolutely
    // convergent with margin
    let min_n = 2 * m.n() + 2;
    if cfg.n < min_n {
        return Err(HsError::BadSpectralArgs {
            reason: format!("N = {} too small for cutoff-free quadrature; need >= {min_n}", cfg.n),
        });
    }
    let z1 = args.z()[0];
    let z2 = args.z()[1];
    let kappa = cfg.n as f64 / (cfg.b * cfg.b); // exponent: -kappa (lambda^2 + xi eta)
    let half_power = -((cfg.n / 2) as i32);

    let lambda_radius = 8.0 * cfg.b / (cfg.n as f64).sqrt();
    let (lam_nodes, lam_weights) =
        composite_nodes(-lambda_radius, lambda_radius, quad.lambda_panel, quad.order);

    let sharpest = cfg.b * cfg.b / (cfg.n as f64 * quad.radius);
    let (xs, ws) = graded_axis(quad.radius, sharpest, quad.order);

    let quadrant = |sign: f64| -> Complex64 {
        // collect per-lambda partial sums and add them in order, so the
        // result does not depend on the parallel split
        let partials: Vec<Complex64> = lam_nodes
            .par_iter()
            .zip(lam_weights.par_iter())
            .map(|(lam, wl)| {
                let gauss_l = (-kappa * lam * lam).exp() * wl;
                let mut acc = Complex64::new(0.0, 0.0);
                for (i, xi_abs) in xs.iter().enumerate() {
                    let xi = sign * xi_abs;
                    for (j, eta_abs) in xs.iter().enumerate() {
                        let eta = sign * eta_abs;
                        let r11 = lam + 0.5 * (xi + eta);
                        let r22 = lam - 0.5 * (xi + eta);
                        let r12 = 0.5 * (eta - xi);
                        let det = (z1 - r11) * (z2 - r22) + r12 * r12;
                        let f = det.powi(half_power) * (-kappa * xi * eta).exp();
                        acc += f * (ws[i] * ws[j]);
                    }
                }
                acc * gauss_l
            })
            .collect();
        partials.iter().sum()
    };

    Ok(quadrant(1.0) - quadrant(-1.0))
}

/// Outcome of the ratio comparison between the sigma-model quadrature and
/// the GOE Monte Carlo, for two spectral argument sets. The per-sample
/// statistic d = w(z1set) - sigma_ratio * w(z2set) has mean zero when the
/// representation holds; z_score = |mean d| / stderr(d).
#[derive(Debug, Clone, Copy)]
pub struct RatioTest {
    pub sigma_ratio: Complex64,
    pub mc_ratio: Complex64,
    pub z_score: f64,
}

/// Stream tag for the ratio-test GOE stream.
const SIGMA_TAG: u64 = 0x5347;

pub fn sigma_mc_ratio_test(
    args1: &SpectralArgs,
    args2: &SpectralArgs,
    cfg: &GOEConfig,
    quad: &SigmaQuad,
    n_samples: u64,
    seed: u64,
) -> Result<RatioTest> {
    if n_samples < 2 {
        return Err(HsError::BadParameter {
            name: "n_samples",
            value: n_samples as f64,
        });
    }
    let sigma1 = sigma_rep_f11(args1, cfg, quad)?;
    let sigma2 = sigma_rep_f11(args2, cfg, quad)?;
    let sigma_ratio = sigma1 / sigma2;

    // common random numbers: both weights from the same spectrum
    let chunk = crate::mc::MC_CHUNK;
    let n_chunks = n_samples.div_ceil(chunk);
    let z1 = args1.z().to_vec();
    let z2 = args2.z().to_vec();
    let partials: Vec<(Complex64, Complex64, Complex64, f64, f64)> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha12Rng::seed_from_u64(derive_subseed(seed, SIGMA_TAG, c));
            let lo = c * chunk;
            let hi = (lo + chunk).min(n_samples);
            let mut s1 = Complex64::new(0.0, 0.0);
            let mut s2 = Complex64::new(0.0, 0.0);
            let mut sd = Complex64::new(0.0, 0.0);
            let (mut d_re2, mut d_im2) = (0.0, 0.0);
            for _ in lo..hi {
                let h = goe_sample(cfg, &mut rng);
                let eig = nalgebra::SymmetricEigen::new(h);
                let w1 = f_weight(&z1, eig.eigenvalues.as_slice());
                let w2 = f_weight(&z2, eig.eigenvalues.as_slice());
                let d = w1 - sigma_ratio * w2;
                s1 += w1;
                s2 += w2;
                sd += d;
                d_re2 += d.re * d.re;
                d_im2 += d.im * d.im;
            }
            (s1, s2, sd, d_re2, d_im2)
        })
        .collect();
    let mut s1 = Complex64::new(0.0, 0.0);
    let mut s2 = Complex64::new(0.0, 0.0);
    let mut sd = Complex64::new(0.0, 0.0);
    let (mut d_re2, mut d_im2) = (0.0, 0.0);
    for (a, b, d, r, i) in partials {
        s1 += a;
        s2 += b;
        sd += d;
        d_re2 += r;
        d_im2 += i;
    }
    let nf = n_samples as f64;
    let mean_d = sd / nf;
    let var_re = ((d_re2 - nf * mean_d.re * mean_d.re) / (nf - 1.0)).max(0.0);
    let var_im = ((d_im2 - nf * mean_d.im * mean_d.im) / (nf - 1.0)).max(0.0);
    let stderr = ((var_re + var_im) / nf).sqrt();
    let z_score = if stderr == 0.0 {
        if mean_d.norm() == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        mean_d.norm() / stderr
    };
    Ok(RatioTest {
        sigma_ratio,
        mc_ratio: s1 / s2,
        z_score,
    })
}
