use thiserror::Error;

pub type Result<T> = std::result::Result<T, AmcfError>;

#[derive(Debug, Error)]
pub enum AmcfError {
    #[error("invalid grid size {0}: must be even and at least 8")]
    InvalidGrid(usize),

    #[error("grid mismatch: expected {expected} samples, got {got}")]
    GridMismatch { expected: usize, got: usize },

    #[error("profile is not positive (min r = {min})")]
    NonPositiveProfile { min: f64 },

    #[error("volume lift inadmissible: eta^2 = {eta_sq}, mean square of zero-mean part = {mean_square}")]
    VolumeLift { eta_sq: f64, mean_square: f64 },

    #[error("lifted profile is not positive (min r = {min})")]
    LiftPositivity { min: f64 },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("finite-difference step {step:e} underflows against |r| = {scale:e}")]
    StepUnderflow { step: f64, scale: f64 },

    #[error("linear system is singular or ill-conditioned (estimate {0:e})")]
    IllConditioned(f64),

    #[error("positivity breach: min r = {min} fell below floor {floor}")]
    PositivityBreach { min: f64, floor: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
