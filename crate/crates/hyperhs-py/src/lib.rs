//! Python bindings over plain lists, floats and complex numbers. Matrices
//! cross the boundary as row-major nested lists; library errors surface as
//! ValueError.

use nalgebra::DMatrix;
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use hyperhs::{
    boundary_eta_integral as rs_boundary_eta_integral, c11, check_goe_fourier, closed_form_i11,
    cutoff_chi, jacobian_j, jacobian_jprime, make_metric, mc_estimate as rs_mc_estimate,
    normalized_quad_error as rs_normalized_quad_error, quad_verify_11, sigma_rep_f11,
    sign_ablation_estimate, spectral_classify, BSymMatrix, BoundaryReason, Convention, GOEConfig,
    LightconeCoords, MCEstimate, Motif, QuadGrid, SigmaQuad, SourceMatrix, SpectralArgs,
    SpectrumClassification, DEFAULT_CLASSIFY_TOL,
};

fn to_py_err(e: hyperhs::HsError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix_from_rows(rows: &[Vec<f64>]) -> PyResult<DMatrix<f64>> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("expected a square row-major matrix"));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn bsym_from_rows(p: usize, q: usize, rows: &[Vec<f64>]) -> PyResult<BSymMatrix> {
    let m = make_metric(p, q).map_err(to_py_err)?;
    BSymMatrix::from_entries(m, matrix_from_rows(rows)?).map_err(to_py_err)
}

fn source_from_rows(p: usize, q: usize, rows: &[Vec<f64>]) -> PyResult<SourceMatrix> {
    let m = make_metric(p, q).map_err(to_py_err)?;
    SourceMatrix::new(m, matrix_from_rows(rows)?).map_err(to_py_err)
}

fn estimate_dict<'py>(py: Python<'py>, est: &MCEstimate) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("value", est.value)?;
    d.set_item("stderr", est.stderr())?;
    d.set_item("n_samples", est.n_samples)?;
    d.set_item("n_accepted", est.n_accepted)?;
    d.set_item("eps", est.eps)?;
    d.set_item("seed", est.seed)?;
    d.set_item("ess", est.ess)?;
    Ok(d)
}

/// Classify a B-symmetric matrix; returns a dict with "status" and, when
/// diagonalizable, "motif", "sign", "eigenvalues" and "bnorms".
#[pyfunction]
#[pyo3(signature = (p, q, rows, tol = DEFAULT_CLASSIFY_TOL))]
fn classify<'py>(
    py: Python<'py>,
    p: usize,
    q: usize,
    rows: Vec<Vec<f64>>,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = bsym_from_rows(p, q, &rows)?;
    let c = spectral_classify(&r, tol).map_err(to_py_err)?;
    let d = PyDict::new(py);
    match c {
        SpectrumClassification::Diagonalizable(s) => {
            d.set_item("status", "diagonalizable")?;
            d.set_item("motif", s.motif.to_string())?;
            d.set_item("sign", s.motif.sign())?;
            d.set_item("eigenvalues", s.eigenvalues)?;
            d.set_item("bnorms", s.bnorms)?;
        }
        SpectrumClassification::Boundary { reason } => {
            d.set_item("status", "boundary")?;
            d.set_item(
                "reason",
                match reason {
                    BoundaryReason::CrossTypeEigenvalueTie => "cross-type eigenvalue tie",
                    BoundaryReason::SmallBNorm => "small B-norm",
                    BoundaryReason::IllConditioned => "ill-conditioned",
                },
            )?;
        }
        SpectrumClassification::NonDiagonalizable { complex_pair_count } => {
            d.set_item("status", "non-diagonalizable")?;
            d.set_item("complex_pair_count", complex_pair_count)?;
        }
    }
    Ok(d)
}

/// Light-cone coordinates (lambda, xi, eta) of a (1,1) B-symmetric matrix.
#[pyfunction]
fn lightcone(rows: Vec<Vec<f64>>) -> PyResult<(f64, f64, f64)> {
    let r = bsym_from_rows(1, 1, &rows)?;
    let lc = LightconeCoords::from_matrix(&r).map_err(to_py_err)?;
    Ok((lc.lambda, lc.xi, lc.eta))
}

/// Inverse of `lightcone`: the 2x2 matrix entries as nested lists.
#[pyfunction]
fn lightcone_inverse(lam: f64, xi: f64, eta: f64) -> Vec<Vec<f64>> {
    let r = LightconeCoords {
        lambda: lam,
        xi,
        eta,
    }
    .to_matrix();
    let e = r.entries();
    vec![
        vec![e[(0, 0)], e[(0, 1)]],
        vec![e[(1, 0)], e[(1, 1)]],
    ]
}

/// Regulator value chi_eps(R) = exp(-(eps/2) Tr (sR - Rs)^2).
#[pyfunction]
fn cutoff(p: usize, q: usize, rows: Vec<Vec<f64>>, eps: f64) -> PyResult<f64> {
    let r = bsym_from_rows(p, q, &rows)?;
    cutoff_chi(&r, eps).map_err(to_py_err)
}

/// Sign of a motif string such as "•◦" (ASCII "*o" accepted).
#[pyfunction]
fn motif_sign(motif: &str, p: usize, q: usize) -> PyResult<i32> {
    let m = make_metric(p, q).map_err(to_py_err)?;
    Ok(Motif::parse(motif, m).map_err(to_py_err)?.sign())
}

/// Vandermonde-type eigenvalue Jacobians (J, J') for a signature.
#[pyfunction]
fn jacobians(lambdas: Vec<f64>, p: usize, q: usize) -> PyResult<(f64, f64)> {
    let m = make_metric(p, q).map_err(to_py_err)?;
    Ok((jacobian_j(&lambdas), jacobian_jprime(&lambdas, m)))
}

/// Exact (1,1) value: returns a dict with the normalized integral (complex),
/// the target 2^(3/2) e^(-Tr A^2 / 2), and the residual.
#[pyfunction]
fn closed_form<'py>(py: Python<'py>, rows: Vec<Vec<f64>>) -> PyResult<Bound<'py, PyDict>> {
    let a = source_from_rows(1, 1, &rows)?;
    let trace = closed_form_i11(&a).map_err(to_py_err)?;
    let target = Convention::Half.target(&a);
    let d = PyDict::new(py);
    d.set_item("value", trace.normalized)?;
    d.set_item("target", target)?;
    d.set_item(
        "residual",
        (trace.normalized - Complex64::new(target, 0.0)).norm() / target,
    )?;
    d.set_item("b0", trace.b0)?;
    d.set_item("b1", trace.b1)?;
    Ok(d)
}

/// Normalized quadrature value of the regularized (1,1) integral.
#[pyfunction]
fn quad_value(rows: Vec<Vec<f64>>, eps: f64) -> PyResult<Complex64> {
    let a = source_from_rows(1, 1, &rows)?;
    let raw = quad_verify_11(&a, eps, &QuadGrid::default()).map_err(to_py_err)?;
    Ok(c11() * raw)
}

/// Relative error of the normalized quadrature value against e^(-Tr A^2).
#[pyfunction]
fn quad_error(rows: Vec<Vec<f64>>, eps: f64) -> PyResult<f64> {
    let a = source_from_rows(1, 1, &rows)?;
    rs_normalized_quad_error(&a, eps, &QuadGrid::default()).map_err(to_py_err)
}

/// Signed Monte Carlo estimate of the regularized integral (normalization
/// left in, matching `quad_value` divided by c11).
#[pyfunction]
#[pyo3(signature = (p, q, rows, eps, n_samples, seed, ablate_sign = false))]
fn mc_estimate<'py>(
    py: Python<'py>,
    p: usize,
    q: usize,
    rows: Vec<Vec<f64>>,
    eps: f64,
    n_samples: u64,
    seed: u64,
    ablate_sign: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let a = source_from_rows(p, q, &rows)?;
    let est = if ablate_sign {
        sign_ablation_estimate(&a, eps, n_samples, seed).map_err(to_py_err)?
    } else {
        rs_mc_estimate(&a, eps, n_samples, seed).map_err(to_py_err)?
    };
    estimate_dict(py, &est)
}

/// Boundary integral at (eps, b): (analytic value, numeric complex value).
#[pyfunction]
fn boundary_integral(eps: f64, b: f64) -> PyResult<(f64, Complex64)> {
    rs_boundary_eta_integral(eps, b).map_err(to_py_err)
}

/// Ensemble Fourier check at a symmetric K; dict with empirical, target,
/// stderr and z.
#[pyfunction]
fn goe_fourier_check<'py>(
    py: Python<'py>,
    n: usize,
    b: f64,
    k_rows: Vec<Vec<f64>>,
    n_samples: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = GOEConfig::new(n, b).map_err(to_py_err)?;
    let k = matrix_from_rows(&k_rows)?;
    let check = check_goe_fourier(&cfg, &k, n_samples, seed).map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("empirical", check.empirical)?;
    d.set_item("target", check.target)?;
    d.set_item("stderr", check.stderr)?;
    d.set_item("z", check.z_score)?;
    Ok(d)
}

/// Integral representation of the two-point determinant average at (1,1);
/// z-arguments as complex numbers, first in the upper half-plane.
#[pyfunction]
fn sigma_f11(z1: Complex64, z2: Complex64, n: usize, b: f64) -> PyResult<Complex64> {
    let m = make_metric(1, 1).map_err(to_py_err)?;
    let args = SpectralArgs::new(m, vec![z1, z2]).map_err(to_py_err)?;
    let cfg = GOEConfig::new(n, b).map_err(to_py_err)?;
    sigma_rep_f11(&args, &cfg, &SigmaQuad::default()).map_err(to_py_err)
}

#[pymodule]
fn hyperhs_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(lightcone, m)?)?;
    m.add_function(wrap_pyfunction!(lightcone_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(cutoff, m)?)?;
    m.add_function(wrap_pyfunction!(motif_sign, m)?)?;
    m.add_function(wrap_pyfunction!(jacobians, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(quad_value, m)?)?;
    m.add_function(wrap_pyfunction!(quad_error, m)?)?;
    m.add_function(wrap_pyfunction!(mc_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_integral, m)?)?;
    m.add_function(wrap_pyfunction!(goe_fourier_check, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_f11, m)?)?;
    Ok(())
}
