use thiserror::Error;

/// Errors produced by construction and evaluation routines.
#[derive(Debug, Error)]
pub enum HsError {
    #[error("signature ({p},{q}) is degenerate: both p and q must be at least 1")]
    DegenerateSignature { p: usize, q: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("block has wrong shape: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    BlockShape {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("matrix violates the symmetry R = s R^t s (max residual {residual:e})")]
    SymmetryViolation { residual: f64 },

    #[error("A*s is not positive definite (smallest eigenvalue {margin:e})")]
    NotPositive { margin: f64 },

    #[error("invalid motif: expected {p} space-like and {q} time-like symbols, got ({got_p},{got_q})")]
    InvalidMotif {
        p: usize,
        q: usize,
        got_p: usize,
        got_q: usize,
    },

    #[error("operation requires signature (1,1), got ({p},{q})")]
    NotSignature11 { p: usize, q: usize },

    #[error("eigensolver failed to converge")]
    EigensolverFailure,

    #[error("parameter {name} out of range: {value}")]
    BadParameter { name: &'static str, value: f64 },

    #[error("quadrature grid too coarse: panel length {panel_len} cannot resolve oscillation scale {required}")]
    GridTooCoarse { panel_len: f64, required: f64 },

    #[error("finite-difference step too large: A - h*Adot leaves the positivity region")]
    StepTooLarge,

    #[error("sigma-model quadrature requires even N, got {n}")]
    OddN { n: usize },

    #[error("invalid spectral arguments: {reason}")]
    BadSpectralArgs { reason: String },

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, HsError>;
