//! Numerical verification of a sign-alternating Gaussian integral identity
//! over O(p,q)-diagonalizable matrix domains, with three engines (closed
//! form at signature (1,1), deterministic light-cone quadrature, and
//! importance-sampled Monte Carlo at general signature) plus a GOE bridge
//! comparing the ensemble average of a characteristic-polynomial observable
//! against its sigma-model integral representation.

pub mod bsym;
pub mod classify;
pub mod closed_form;
pub mod error;
pub mod goe;
pub mod group;
pub mod io;
pub mod mc;
pub mod metric;
pub mod motif;
pub mod path;
pub mod quad11;
pub mod quadrature;
pub mod seeding;
pub mod sigma11;

pub use bsym::{
    commutator_trace_sq, cutoff_chi, positivity_margin, BSymMatrix, LightconeCoords, SourceMatrix,
};
pub use classify::{
    spectral_classify, BoundaryReason, DiagonalizableSpectrum, SpectrumClassification,
    DEFAULT_CLASSIFY_TOL,
};
pub use closed_form::{
    boundary_eta_integral, c11, closed_form_i11, gaussian_rho_integral, gaussian_tau_integral,
    ClosedFormTrace, Convention,
};
pub use error::{HsError, Result};
pub use goe::{
    build_a_from_fields, check_goe_fourier, f_mc, goe_sample, FieldSource, FourierCheck,
    GOEConfig, SpectralArgs,
};
pub use group::{boost_11, random_group_element};
pub use io::{parse_matrix, sweep_csv, Engine, MatrixJson, RunConfig, SweepRow, FORMAT_VERSION};
pub use mc::{
    compensated_pair_difference, directional_derivative_test, mc_combination, mc_estimate,
    sign_ablation_estimate, EpsilonSchedule, MCEstimate, WeightTerm,
};
pub use metric::{make_metric, SignatureMetric};
pub use motif::{
    enumerate_motifs, jacobian_j, jacobian_jprime, sign_from_eigenvalues, EigenType, Motif,
};
pub use path::{trace_collision_path, CollisionTrace, PathPoint};
pub use quad11::{normalized_quad_error, quad_ablated_11, quad_verify_11, QuadGrid};
pub use seeding::derive_subseed;
pub use sigma11::{sigma_mc_ratio_test, sigma_rep_f11, RatioTest, SigmaQuad};
