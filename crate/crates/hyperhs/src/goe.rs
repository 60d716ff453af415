//! GOE sampling and the ensemble-averaged observable F(z). The ensemble is
//! fixed by its Fourier transform <e^{i Tr HK}> = e^{-(b^2/2N) Tr K^2};
//! matching second moments over symmetric K gives independent Gaussian
//! entries with diagonal variance b^2/N and off-diagonal variance b^2/(2N).
//! check_goe_fourier guards that derivation empirically.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{HsError, Result};
use crate::mc::{MCEstimate, MC_CHUNK};
use crate::metric::SignatureMetric;
use crate::seeding::derive_subseed;

/// Stream tag for sub-seed derivation of GOE sampling.
const GOE_TAG: u64 = 0x474f45;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GOEConfig {
    pub n: usize,
    pub b: f64,
}

impl GOEConfig {
    pub fn new(n: usize, b: f64) -> Result<Self> {
        if n < 2 {
            return Err(HsError::BadParameter {
                name: "N",
                value: n as f64,
            });
        }
        Ok(Self { n, b })
    }

    pub fn diag_var(&self) -> f64 {
        self.b * self.b / self.n as f64
    }

    pub fn offdiag_var(&self) -> f64 {
        self.b * self.b / (2.0 * self.n as f64)
    }
}

/// One symmetric sample with the stated entry variances.
pub fn goe_sample<R: Rng + ?Sized>(cfg: &GOEConfig, rng: &mut R) -> DMatrix<f64> {
    let n = cfg.n;
    let sd_diag = cfg.diag_var().sqrt();
    let sd_off = cfg.offdiag_var().sqrt();
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let g: f64 = rng.sample(StandardNormal);
            let v = g * if i == j { sd_diag } else { sd_off };
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    h
}

#[derive(Debug, Clone, Copy)]
pub struct FourierCheck {
    pub empirical: Complex64,
    pub target: f64,
    pub stderr: f64,
    pub z_score: f64,
}

/// Empirical mean of e^{i Tr HK} against the target e^{-(b^2/2N) Tr K^2}.
pub fn check_goe_fourier(
    cfg: &GOEConfig,
    k: &DMatrix<f64>,
    n_samples: u64,
    seed: u64,
) -> Result<FourierCheck> {
    if k.nrows() != cfg.n || k.ncols() != cfg.n {
        return Err(HsError::DimensionMismatch {
            expected: cfg.n,
            got: k.nrows(),
        });
    }
    if (k - k.transpose()).amax() > 1e-12 {
        return Err(HsError::SymmetryViolation {
            residual: (k - k.transpose()).amax(),
        });
    }
    let (sum, sum_re2, sum_im2) = goe_average(cfg, n_samples, seed, |h| {
        Complex64::new(0.0, (h * k).trace()).exp()
    });
    let nf = n_samples as f64;
    let mean = sum / nf;
    let var_re = ((sum_re2 - nf * mean.re * mean.re) / (nf - 1.0)).max(0.0);
    let var_im = ((sum_im2 - nf * mean.im * mean.im) / (nf - 1.0)).max(0.0);
    let stderr = ((var_re + var_im) / nf).sqrt();
    let target = (-cfg.b * cfg.b / (2.0 * cfg.n as f64) * (k * k).trace()).exp();
    let diff = (mean - target).norm();
    let z_score = if stderr == 0.0 {
        if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        diff / stderr
    };
    Ok(FourierCheck {
        empirical: mean,
        target,
        stderr,
        z_score,
    })
}

/// Deterministic chunked-parallel mean of f(H) over the ensemble, returning
/// (sum, sum of re^2, sum of im^2).
fn goe_average<F>(cfg: &GOEConfig, n_samples: u64, seed: u64, f: F) -> (Complex64, f64, f64)
where
    F: Fn(&DMatrix<f64>) -> Complex64 + Sync,
{
    let n_chunks = n_samples.div_ceil(MC_CHUNK);
    let partials: Vec<(Complex64, f64, f64)> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha12Rng::seed_from_u64(derive_subseed(seed, GOE_TAG, chunk));
            let lo = chunk * MC_CHUNK;
            let hi = (lo + MC_CHUNK).min(n_samples);
            let mut sum = Complex64::new(0.0, 0.0);
            let (mut re2, mut im2) = (0.0, 0.0);
            for _ in lo..hi {
                let h = goe_sample(cfg, &mut rng);
                let v = f(&h);
                sum += v;
                re2 += v.re * v.re;
                im2 += v.im * v.im;
            }
            (sum, re2, im2)
        })
        .collect();
    let mut sum = Complex64::new(0.0, 0.0);
    let (mut re2, mut im2) = (0.0, 0.0);
    for (s, r, i) in partials {
        sum += s;
        re2 += r;
        im2 += i;
    }
    (sum, re2, im2)
}

/// Spectral arguments z_1..z_{p+q} with Im z_j > 0 for the first p and
/// Im z_j < 0 for the rest.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralArgs {
    metric: SignatureMetric,
    z: Vec<Complex64>,
}

impl SpectralArgs {
    pub fn new(metric: SignatureMetric, z: Vec<Complex64>) -> Result<Self> {
        if z.len() != metric.n() {
            return Err(HsError::BadSpectralArgs {
                reason: format!("expected {} arguments, got {}", metric.n(), z.len()),
            });
        }
        for (j, zj) in z.iter().enumerate() {
            let want_upper = j < metric.p();
            if zj.im == 0.0 || (zj.im > 0.0) != want_upper {
                return Err(HsError::BadSpectralArgs {
                    reason: format!(
                        "argument {j} must have {} imaginary part, got {zj}",
                        if want_upper { "positive" } else { "negative" }
                    ),
                });
            }
        }
        Ok(Self { metric, z })
    }

    pub fn metric(&self) -> SignatureMetric {
        self.metric
    }

    pub fn z(&self) -> &[Complex64] {
        &self.z
    }

    /// Half-plane signs s_j = sign(Im z_j).
    pub fn half_plane_signs(&self) -> Vec<i32> {
        self.z.iter().map(|z| if z.im > 0.0 { 1 } else { -1 }).collect()
    }
}

/// Per-sample integrand of F: prod_j Det^{-1/2}(z_j - H) with the principal
/// square root per eigenvalue factor (each factor stays in one open
/// half-plane since Im z_j != 0 and the spectrum is real).
pub fn f_weight(z: &[Complex64], eigenvalues: &[f64]) -> Complex64 {
    // per-argument factors first: conjugating one z_j then conjugates its
    // factor exactly, which makes the conjugation identity hold bitwise
    z.iter()
        .map(|zj| {
            let mut u = Complex64::new(1.0, 0.0);
            for lam in eigenvalues {
                u /= (zj - lam).sqrt();
            }
            u
        })
        .product()
}

/// Monte Carlo estimate of F(z) = <prod_j Det^{-1/2}(z_j - H)>.
pub fn f_mc(args: &SpectralArgs, cfg: &GOEConfig, n_samples: u64, seed: u64) -> Result<MCEstimate> {
    if n_samples == 0 {
        return Err(HsError::BadParameter {
            name: "n_samples",
            value: 0.0,
        });
    }
    let z = args.z().to_vec();
    let (sum, re2, im2) = goe_average(cfg, n_samples, seed, move |h| {
        let eig = nalgebra::SymmetricEigen::new(h.clone());
        f_weight(&z, eig.eigenvalues.as_slice())
    });
    let nf = n_samples as f64;
    let mean = sum / nf;
    let var_re = ((re2 - nf * mean.re * mean.re) / (nf - 1.0)).max(0.0);
    let var_im = ((im2 - nf * mean.im * mean.im) / (nf - 1.0)).max(0.0);
    Ok(MCEstimate {
        value: mean,
        stderr_re: (var_re / nf).sqrt(),
        stderr_im: (var_im / nf).sqrt(),
        n_samples,
        n_accepted: n_samples,
        eps: 0.0,
        proposal_scale: cfg.b,
        seed,
        ess: nf,
    })
}

/// A(phi)_{ij} = sum_a phi_{i,a} phi_{j,a} s_j built from microscopic
/// fields; always B-symmetric, with A s the (positive semi-definite) Gram
/// matrix of the field rows.
#[derive(Debug, Clone)]
pub struct FieldSource {
    pub a: DMatrix<f64>,
    /// Smallest eigenvalue of A s.
    pub positivity_margin: f64,
    /// False when A s is only semi-definite (margin within tolerance of 0).
    pub strictly_positive: bool,
}

pub fn build_a_from_fields(phis: &DMatrix<f64>, metric: SignatureMetric) -> Result<FieldSource> {
    if phis.nrows() != metric.n() {
        return Err(HsError::DimensionMismatch {
            expected: metric.n(),
            got: phis.nrows(),
        });
    }
    let gram = phis * phis.transpose();
    let a = &gram * metric.s_matrix();
    let margin = nalgebra::SymmetricEigen::new(gram)
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    Ok(FieldSource {
        a,
        positivity_margin: margin,
        strictly_positive: margin > 1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::make_metric;
    use approx::assert_relative_eq;

    #[test]
    fn zero_scale_gives_zero_matrix() {
        let cfg = GOEConfig::new(4, 0.0).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        assert_eq!(goe_sample(&cfg, &mut rng).amax(), 0.0);
    }

    #[test]
    fn samples_are_symmetric_with_expected_second_moment() {
        // E[Tr H^2] = N (b^2/N) + N(N-1) (b^2/2N) = b^2 (N+1)/2
        let cfg = GOEConfig::new(8, 1.0).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let n_samp = 20_000;
        let mut mean = 0.0;
        let mut m2 = 0.0;
        for _ in 0..n_samp {
            let h = goe_sample(&cfg, &mut rng);
            assert_eq!(h, h.transpose());
            let t = (&h * &h).trace();
            mean += t;
            m2 += t * t;
        }
        mean /= n_samp as f64;
        m2 /= n_samp as f64;
        let se = ((m2 - mean * mean) / n_samp as f64).sqrt();
        let want = 1.0 * (8.0 + 1.0) / 2.0;
        assert!((mean - want).abs() < 3.0 * se, "mean {mean}, want {want}");
    }

    #[test]
    fn fourier_check_examples() {
        let cfg = GOEConfig::new(8, 1.0).unwrap();
        // K = 0: exact
        let k0 = DMatrix::zeros(8, 8);
        let c = check_goe_fourier(&cfg, &k0, 100, 1).unwrap();
        assert_eq!(c.empirical, Complex64::new(1.0, 0.0));
        assert_eq!(c.target, 1.0);
        assert_eq!(c.z_score, 0.0);

        // K = diag(1, 0, ..): target e^{-1/16}
        let mut k = DMatrix::zeros(8, 8);
        k[(0, 0)] = 1.0;
        let c = check_goe_fourier(&cfg, &k, 50_000, 2).unwrap();
        assert_relative_eq!(c.target, (-1.0f64 / 16.0).exp(), epsilon = 1e-15);
        assert!(c.z_score < 4.0, "z {}", c.z_score);
    }

    #[test]
    fn field_source_examples() {
        let m = make_metric(1, 1).unwrap();
        // phi = 0
        let f = build_a_from_fields(&DMatrix::zeros(2, 3), m).unwrap();
        assert!(!f.strictly_positive);
        assert_eq!(f.a.amax(), 0.0);

        // N = 1, phi = [[1],[1]] -> A = [[1,-1],[1,-1]], rank-1 Gram
        let f = build_a_from_fields(&DMatrix::from_column_slice(2, 1, &[1.0, 1.0]), m).unwrap();
        assert_eq!(f.a, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, 1.0, -1.0]));
        assert!(!f.strictly_positive);

        // generic fields with many columns: strictly positive, B-symmetric
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let phis = DMatrix::from_fn(2, 10, |_, _| rng.sample::<f64, _>(StandardNormal));
        let f = build_a_from_fields(&phis, m).unwrap();
        assert!(f.strictly_positive);
        let s = m.s_matrix();
        let resid = (&f.a - &s * f.a.transpose() * &s).amax();
        assert!(resid < 1e-12);
        assert!(crate::bsym::SourceMatrix::new(m, f.a.clone()).is_ok());
    }

    #[test]
    fn spectral_args_validation() {
        let m = make_metric(1, 1).unwrap();
        assert!(SpectralArgs::new(
            m,
            vec![Complex64::new(0.5, 1.0), Complex64::new(0.5, -1.0)]
        )
        .is_ok());
        // wrong half-plane order
        assert!(SpectralArgs::new(
            m,
            vec![Complex64::new(0.5, -1.0), Complex64::new(0.5, 1.0)]
        )
        .is_err());
        // real argument
        assert!(SpectralArgs::new(
            m,
            vec![Complex64::new(0.5, 0.0), Complex64::new(0.5, -1.0)]
        )
        .is_err());
        // wrong count
        assert!(SpectralArgs::new(m, vec![Complex64::new(0.5, 1.0)]).is_err());
    }

    #[test]
    fn conjugation_identity_exact_per_seed() {
        let m = make_metric(1, 1).unwrap();
        let cfg = GOEConfig::new(8, 1.0).unwrap();
        let args = SpectralArgs::new(
            m,
            vec![Complex64::new(0.5, 1.0), Complex64::new(0.3, -0.8)],
        )
        .unwrap();
        // conjugate all z and swap the p/q roles: same metric at (1,1)
        let conj_args = SpectralArgs::new(
            m,
            vec![Complex64::new(0.3, 0.8), Complex64::new(0.5, -1.0)],
        )
        .unwrap();
        let e1 = f_mc(&args, &cfg, 2_000, 7).unwrap();
        let e2 = f_mc(&conj_args, &cfg, 2_000, 7).unwrap();
        assert_eq!(e2.value, e1.value.conj());
    }

    #[test]
    fn pure_imaginary_pair_gives_real_estimate() {
        let m = make_metric(1, 1).unwrap();
        let cfg = GOEConfig::new(8, 1.0).unwrap();
        let args = SpectralArgs::new(
            m,
            vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)],
        )
        .unwrap();
        let e = f_mc(&args, &cfg, 20_000, 5).unwrap();
        assert!(
            e.value.im.abs() < 3.0 * e.stderr_im.max(1e-15),
            "im {} stderr {}",
            e.value.im,
            e.stderr_im
        );
        // for the conjugate pair each sample weight is |det|^{-1/2} ... > 0
        assert!(e.value.re > 0.0);
    }

    #[test]
    fn large_imaginary_argument_asymptotics() {
        // F(z) -> prod z_j^{-N/2} as |Im z| grows
        let m = make_metric(1, 1).unwrap();
        let cfg = GOEConfig::new(4, 1.0).unwrap();
        let z1 = Complex64::new(0.0, 50.0);
        let z2 = Complex64::new(0.0, -50.0);
        let args = SpectralArgs::new(m, vec![z1, z2]).unwrap();
        let e = f_mc(&args, &cfg, 10_000, 9).unwrap();
        let want = z1.powf(-2.0) * z2.powf(-2.0);
        assert!(
            (e.value - want).norm() < 0.01 * want.norm(),
            "got {}, want {want}",
            e.value
        );
    }
}
