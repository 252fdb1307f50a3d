use thiserror::Error;

/// Errors produced by sampling, fitting and set queries.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter {field}: {reason}")]
    InvalidParam { field: &'static str, reason: String },

    #[error("integration diverged at time index {time_index}{}", sample.map(|s| format!(" (sample {s})")).unwrap_or_default())]
    IntegrationDiverged {
        time_index: usize,
        sample: Option<usize>,
    },

    #[error("disturbance weights have not been drawn")]
    WeightsNotDrawn,

    #[error("dimension index {dim} out of range for state dimension {state_dim}")]
    DimensionOutOfRange { dim: usize, state_dim: usize },

    #[error("duplicate dimension index {dim}")]
    DuplicateDimension { dim: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("binomial coefficient overflows the integer range")]
    BinomialOverflow,

    #[error("sample set is empty")]
    EmptySampleSet,

    #[error("samples lie in a proper affine subspace; the ellipsoid fit needs full-dimensional data")]
    RankDeficientData,

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("ellipsoid fit did not converge within {max_iter} iterations")]
    ConvergenceFailure { max_iter: usize },

    #[error("fit failed at time index {time_index}: {source}")]
    TubeFit {
        time_index: usize,
        source: Box<Error>,
    },

    #[error("grid evaluation supports 1 to 3 dimensions, got {0}")]
    UnsupportedDimension(usize),

    #[error("bounds too small: training sample {sample} falls outside the query bounds")]
    BoundsTooSmall { sample: usize },

    #[error("full trajectories were not retained (sample with keep_full enabled)")]
    MissingFullTrajectories,

    #[error("custom sampler returned a malformed trajectory: {0}")]
    MalformedTrajectory(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
