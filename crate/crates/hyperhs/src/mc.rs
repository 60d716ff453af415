//! Importance-sampled Monte Carlo engine for the signed integral at general
//! signature. Samples are drawn from the Euclidean Gaussian proposal
//! density ~ e^{-Tr(R^t R)/c} with c = max(1, 1/eps); on the diagonalizable
//! set the identities Tr(R^t R) = TrR^2 + 4||R_pq||^2 and TrR^2 = sum
//! lambda_i^2 bound every importance weight by the proposal normalization.
//!
//! The sample stream is split into fixed-size chunks with independently
//! derived sub-seeds; chunks run in parallel and are reduced in index
//! order, so results are bit-identical for a given seed regardless of
//! worker count. All estimators that compare two sources share one R
//! stream (common random numbers) by evaluating several weight terms per
//! sample.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::bsym::{BSymMatrix, LightconeCoords, SourceMatrix};
use crate::classify::{spectral_classify, SpectrumClassification, DEFAULT_CLASSIFY_TOL};
use crate::error::{HsError, Result};
use crate::metric::SignatureMetric;
use crate::seeding::derive_subseed;

/// Chunk size of the deterministic parallel reduction. Part of the
/// reproducibility contract: changing it changes the stream.
pub const MC_CHUNK: u64 = 16384;

/// Stream tag for sub-seed derivation within the MC engine.
const MC_TAG: u64 = 0x4d43;

/// Result of a Monte Carlo sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub value: Complex64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub n_samples: u64,
    /// Samples classified diagonalizable; the rest contribute zero.
    pub n_accepted: u64,
    pub eps: f64,
    pub proposal_scale: f64,
    pub seed: u64,
    /// Effective sample size (sum |f|)^2 / sum |f|^2.
    pub ess: f64,
}

impl MCEstimate {
    pub fn acceptance_rate(&self) -> f64 {
        self.n_accepted as f64 / self.n_samples as f64
    }

    /// Combined standard error of the complex mean.
    pub fn stderr(&self) -> f64 {
        self.stderr_re.hypot(self.stderr_im)
    }

    /// |value| measured in standard errors; 0 when both vanish.
    pub fn z_score(&self) -> f64 {
        let s = self.stderr();
        if s == 0.0 {
            if self.value.norm() == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.value.norm() / s
        }
    }
}

/// Strictly decreasing schedule of positive regularization parameters.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct EpsilonSchedule {
    values: Vec<f64>,
}

impl EpsilonSchedule {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(HsError::Parse("empty epsilon schedule".into()));
        }
        for w in values.windows(2) {
            if w[1] >= w[0] {
                return Err(HsError::Parse(format!(
                    "epsilon schedule must be strictly decreasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if *values.last().unwrap() <= 0.0 {
            return Err(HsError::BadParameter {
                name: "eps",
                value: *values.last().unwrap(),
            });
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl TryFrom<Vec<f64>> for EpsilonSchedule {
    type Error = HsError;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<EpsilonSchedule> for Vec<f64> {
    fn from(s: EpsilonSchedule) -> Vec<f64> {
        s.values
    }
}

/// One weight in a common-random-numbers combination. Each accepted sample
/// contributes coeff * sgn * e^{-TrR^2 - 2i TrAR} chi_eps(R) / proposal(R),
/// with sgn forced to +1 when `ablate_sign` and the whole term multiplied
/// by e^{TrA^2} when `compensate` (making it constant in A by the identity
/// under test).
#[derive(Debug, Clone)]
pub struct WeightTerm {
    pub a: SourceMatrix,
    pub coeff: Complex64,
    pub ablate_sign: bool,
    pub compensate: bool,
}

impl WeightTerm {
    pub fn plain(a: SourceMatrix) -> Self {
        Self {
            a,
            coeff: Complex64::new(1.0, 0.0),
            ablate_sign: false,
            compensate: false,
        }
    }
}

/// Motif sign of a sample, or None when not diagonalizable (complex pair or
/// boundary). Signature (1,1) short-circuits through light-cone
/// coordinates; higher signatures classify through the eigensolver.
pub fn classify_sign(r: &BSymMatrix, tol: f64) -> Option<i32> {
    let m = r.metric();
    if m.p() == 1 && m.q() == 1 {
        let lc = LightconeCoords::from_matrix(r).expect("signature checked");
        let prod = lc.xi * lc.eta;
        if prod <= 0.0 {
            return None;
        }
        return Some(if lc.xi > 0.0 { 1 } else { -1 });
    }
    match spectral_classify(r, tol) {
        Ok(SpectrumClassification::Diagonalizable(d)) => Some(d.motif.sign()),
        _ => None,
    }
}

struct ChunkAcc {
    sum: Complex64,
    sum_re2: f64,
    sum_im2: f64,
    sum_abs: f64,
    sum_abs2: f64,
    accepted: u64,
}

/// Evaluate the combination sum_j term_j on one shared sample stream.
pub fn mc_combination(
    metric: SignatureMetric,
    terms: &[WeightTerm],
    eps: f64,
    n: u64,
    seed: u64,
) -> Result<MCEstimate> {
    if eps <= 0.0 || eps >= 1.0 {
        return Err(HsError::BadParameter {
            name: "eps",
            value: eps,
        });
    }
    if n == 0 {
        return Err(HsError::BadParameter {
            name: "n",
            value: 0.0,
        });
    }
    for t in terms {
        if t.a.metric() != metric {
            return Err(HsError::DimensionMismatch {
                expected: metric.n(),
                got: t.a.metric().n(),
            });
        }
    }

    let c = (1.0 / eps).max(1.0);
    let dims = metric.n();
    // free parameters: upper triangle incl. diagonal, row-major
    let mut sigmas = Vec::with_capacity(dims * (dims + 1) / 2);
    let mut log_z = 0.0;
    for i in 0..dims {
        for j in i..dims {
            let var = if i == j { c / 2.0 } else { c / 4.0 };
            sigmas.push(var.sqrt());
            log_z += 0.5 * (2.0 * std::f64::consts::PI * var).ln();
        }
    }
    let z_norm = log_z.exp();

    struct TermData {
        a: DMatrix<f64>,
        coeff: Complex64,
        ablate_sign: bool,
        scale: f64, // Z * optional e^{TrA^2}
    }
    let term_data: Vec<TermData> = terms
        .iter()
        .map(|t| TermData {
            a: t.a.entries().clone(),
            coeff: t.coeff,
            ablate_sign: t.ablate_sign,
            scale: z_norm * if t.compensate { t.a.trace_a_squared().exp() } else { 1.0 },
        })
        .collect();

    let n_chunks = n.div_ceil(MC_CHUNK);
    let chunk_accs: Vec<ChunkAcc> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha12Rng::seed_from_u64(derive_subseed(seed, MC_TAG, chunk));
            let lo = chunk * MC_CHUNK;
            let hi = (lo + MC_CHUNK).min(n);
            let mut acc = ChunkAcc {
                sum: Complex64::new(0.0, 0.0),
                sum_re2: 0.0,
                sum_im2: 0.0,
                sum_abs: 0.0,
                sum_abs2: 0.0,
                accepted: 0,
            };
            let mut upper = vec![0.0f64; sigmas.len()];
            for _ in lo..hi {
                for (u, s) in upper.iter_mut().zip(&sigmas) {
                    let g: f64 = rng.sample(StandardNormal);
                    *u = g * s;
                }
                let r = BSymMatrix::from_upper_triangle(metric, &upper);
                let Some(sgn) = classify_sign(&r, DEFAULT_CLASSIFY_TOL) else {
                    continue;
                };
                acc.accepted += 1;
                let tr2 = r.trace_r_squared();
                let q2 = r.offdiag_norm_sq();
                // |integrand| / proposal, before Z: exponent is
                // -tr2 (1 - 1/c) - 4 q2 (eps - 1/c), nonpositive on the
                // diagonalizable set since tr2 = sum lambda^2 >= 0 there
                let expo = -tr2 * (1.0 - 1.0 / c) - 4.0 * q2 * (eps - 1.0 / c);
                debug_assert!(expo <= 1e-9, "weight bound violated: {expo}");
                let base = expo.exp() * sgn as f64;
                let mut v = Complex64::new(0.0, 0.0);
                for t in &term_data {
                    let phase = Complex64::new(0.0, -2.0 * r.trace_product(&t.a)).exp();
                    let s = if t.ablate_sign { base.abs() } else { base };
                    v += t.coeff * phase * (s * t.scale);
                }
                acc.sum += v;
                acc.sum_re2 += v.re * v.re;
                acc.sum_im2 += v.im * v.im;
                acc.sum_abs += v.norm();
                acc.sum_abs2 += v.norm_sqr();
            }
            acc
        })
        .collect();

    // sequential reduction in chunk order keeps the result deterministic
    let mut sum = Complex64::new(0.0, 0.0);
    let (mut sum_re2, mut sum_im2, mut sum_abs, mut sum_abs2) = (0.0, 0.0, 0.0, 0.0);
    let mut accepted = 0u64;
    for a in &chunk_accs {
        sum += a.sum;
        sum_re2 += a.sum_re2;
        sum_im2 += a.sum_im2;
        sum_abs += a.sum_abs;
        sum_abs2 += a.sum_abs2;
        accepted += a.accepted;
    }

    let nf = n as f64;
    let mean = sum / nf;
    let var = |sum_sq: f64, m: f64| ((sum_sq - nf * m * m) / (nf - 1.0).max(1.0)).max(0.0);
    Ok(MCEstimate {
        value: mean,
        stderr_re: (var(sum_re2, mean.re) / nf).sqrt(),
        stderr_im: (var(sum_im2, mean.im) / nf).sqrt(),
        n_samples: n,
        n_accepted: accepted,
        eps,
        proposal_scale: c,
        seed,
        ess: if sum_abs2 > 0.0 {
            sum_abs * sum_abs / sum_abs2
        } else {
            0.0
        },
    })
}

/// Signed Monte Carlo estimate of the regularized integral (normalization
/// constant left in, as with the quadrature engine).
pub fn mc_estimate(a: &SourceMatrix, eps: f64, n: u64, seed: u64) -> Result<MCEstimate> {
    mc_combination(a.metric(), &[WeightTerm::plain(a.clone())], eps, n, seed)
}

/// mc_estimate with sgn replaced by +1 (integrating J instead of J');
/// exists to exhibit the failure mode.
pub fn sign_ablation_estimate(a: &SourceMatrix, eps: f64, n: u64, seed: u64) -> Result<MCEstimate> {
    let term = WeightTerm {
        ablate_sign: true,
        ..WeightTerm::plain(a.clone())
    };
    mc_combination(a.metric(), &[term], eps, n, seed)
}

/// Per-sample difference of the compensated values at two sources, under
/// common random numbers. For the signed estimator the difference is zero
/// in expectation; its z-score is the test statistic.
pub fn compensated_pair_difference(
    a1: &SourceMatrix,
    a2: &SourceMatrix,
    ablate_sign: bool,
    eps: f64,
    n: u64,
    seed: u64,
) -> Result<MCEstimate> {
    let one = Complex64::new(1.0, 0.0);
    let terms = [
        WeightTerm {
            a: a1.clone(),
            coeff: one,
            ablate_sign,
            compensate: true,
        },
        WeightTerm {
            a: a2.clone(),
            coeff: -one,
            ablate_sign,
            compensate: true,
        },
    ];
    mc_combination(a1.metric(), &terms, eps, n, seed)
}

/// Central finite difference of the compensated estimator along a
/// B-symmetric direction, returned as a z-score. The identity makes the
/// compensated value constant in A, so the statistic should be noise.
pub fn directional_derivative_test(
    a: &SourceMatrix,
    adot: &BSymMatrix,
    eps: f64,
    n: u64,
    h: f64,
    seed: u64,
    ablate_sign: bool,
) -> Result<f64> {
    if h <= 0.0 {
        return Err(HsError::BadParameter { name: "h", value: h });
    }
    if adot.entries().amax() == 0.0 {
        return Ok(0.0);
    }
    let metric = a.metric();
    let plus = a.entries() + adot.entries() * h;
    let minus = a.entries() - adot.entries() * h;
    let a_plus = SourceMatrix::new(metric, plus).map_err(|_| HsError::StepTooLarge)?;
    let a_minus = SourceMatrix::new(metric, minus).map_err(|_| HsError::StepTooLarge)?;
    let c = Complex64::new(1.0 / (2.0 * h), 0.0);
    let terms = [
        WeightTerm {
            a: a_plus,
            coeff: c,
            ablate_sign,
            compensate: true,
        },
        WeightTerm {
            a: a_minus,
            coeff: -c,
            ablate_sign,
            compensate: true,
        },
    ];
    let est = mc_combination(metric, &terms, eps, n, seed)?;
    Ok(est.z_score())
}
