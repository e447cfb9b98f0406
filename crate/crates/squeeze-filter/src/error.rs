use thiserror::Error;

use crate::bogoliubov::BogoliubovResiduals;
use crate::gaussian::Classification;

/// Errors produced by the library and the CLI front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("mean photon number must satisfy n >= 0, got n = {n}")]
    NegativePhotonNumber { n: f64 },

    #[error("covariance positivity n(n+1) - |m|^2 >= 0 violated: deficit = {delta}")]
    CovarianceNotPositive { delta: f64 },

    #[error("coefficients are not a Bogoliubov transformation (max residual {max:.3e})", max = report.max())]
    NotBogoliubov { report: BogoliubovResiduals },

    #[error("coefficients violate the balanced identities (residuals {number:.3e}, {exchange:.3e})")]
    NotBalanced { number: f64, exchange: f64 },

    #[error("state ({n}, {m}) is {class:?}; a strictly sub-maximal or thermal state is required")]
    UnsupportedSqueezing { n: f64, m: num_complex::Complex64, class: Classification },

    #[error("singular parametrization: rho - Re m = {value:.3e} <= 0")]
    SingularParametrization { value: f64 },

    #[error("cross variation vanishes for every phase; choose lambda explicitly")]
    DegeneratePhase,

    #[error("singular transfer matrix: |D| = {det_abs:.3e} below threshold {threshold:.3e}")]
    SingularTransfer { det_abs: f64, threshold: f64 },

    #[error("matrix shape mismatch: expected {expected}x{expected}, got {rows}x{cols}")]
    ShapeMismatch { expected: usize, rows: usize, cols: usize },

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("not a valid state: {reason}")]
    InvalidState { reason: String },

    #[error("filter step failed at t = {t}: trace collapsed to {trace:.3e}; reduce dt")]
    StepFailure { t: f64, trace: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
