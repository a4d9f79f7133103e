use thiserror::Error;

/// Errors produced by the library.
///
/// Variants split into two broad groups that the CLI maps to distinct exit
/// codes: data problems (malformed or inconsistent inputs) and numeric
/// problems (parameters outside the mathematical domain of an operation).
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("grid mismatch: operands live on different grids")]
    GridMismatch,

    #[error("invalid bandwidth: {0} (must be positive and finite)")]
    InvalidBandwidth(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("covariance matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("{path}:{line}: {message}")]
    Csv {
        path: String,
        line: u64,
        message: String,
    },

    #[error("no label found for bag_id {0}")]
    MissingLabel(u64),

    #[error("model store: {0}")]
    ModelFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for errors caused by bad input data (files, shapes, labels)
    /// rather than out-of-domain numeric parameters.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::EmptyInput(_)
                | Error::DimensionMismatch { .. }
                | Error::GridMismatch
                | Error::Csv { .. }
                | Error::MissingLabel(_)
                | Error::ModelFormat(_)
                | Error::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
