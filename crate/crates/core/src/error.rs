use thiserror::Error;

/// Errors raised by the model, fitting, Monte-Carlo and estimate routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid position: {0}")]
    InvalidPosition(f64),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid thermodynamic coupling: {0}")]
    InvalidThermo(String),

    #[error("degenerate thermodynamic coupling: beta_E0 must be > 0")]
    DegenerateCoupling,

    #[error("intensity must be peak-normalized to [0, 1], got {0}")]
    IntensityNotNormalized(f64),

    #[error("invalid kinematics: {0}")]
    InvalidKinematics(String),

    #[error("de Broglie wavelength undefined at rest")]
    DeBroglieAtRest,

    #[error("invalid pattern curve: {0}")]
    InvalidCurve(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("empty fit window: no samples with |theta| <= {0}")]
    EmptyWindow(f64),

    #[error("invalid fit configuration: {0}")]
    InvalidFitConfig(String),

    #[error("bracket exhausted: minimum at width scale {scale} lies on the bound [{lower}, {upper}]")]
    BracketExhausted { scale: f64, lower: f64, upper: f64 },

    #[error("no trapping possible: every well depth is zero")]
    NoTrapping,

    #[error("invalid ensemble configuration: {0}")]
    InvalidEnsemble(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid estimate input: {0}")]
    InvalidEstimate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
