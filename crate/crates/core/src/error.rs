use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("model is not stationary (largest root magnitude {max_root})")]
    NonStationary { max_root: f64 },

    #[error("degenerate model: Yule-Walker pivot {pivot:e} below threshold")]
    DegenerateModel { pivot: f64 },

    #[error("matrix is not positive definite (pivot {pivot:e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("offset {offset} exceeds autocovariance table range (max lag {max_lag})")]
    OffsetOutOfRange { offset: usize, max_lag: usize },

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("numerical consistency violated: conditional mutual information {value:e} is negative")]
    NegativeInformation { value: f64 },

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
