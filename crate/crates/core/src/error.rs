use thiserror::Error;

pub type Result<T> = std::result::Result<T, BoapError>;

#[derive(Debug, Error)]
pub enum BoapError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("lengthscale must be strictly positive, got {0}")]
    NonPositiveLengthscale(f64),

    #[error("matrix is not positive definite after jitter up to {max_jitter:e}")]
    Conditioning { max_jitter: f64 },

    #[error("holdout set is empty")]
    EmptyHoldout,

    #[error("dataset error at row {row}, column `{column}`: {message}")]
    Dataset {
        row: usize,
        column: String,
        message: String,
    },

    #[error("oracle failure: {0}")]
    Oracle(String),

    #[error("budget exhausted after {0} evaluations")]
    BudgetExhausted(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
