//! Error type shared by every module in the crate.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A coordinate or parameter was NaN or infinite.
    #[error("invalid input: non-finite {context}")]
    NonFinite { context: String },

    /// Too few points, all points collinear, or otherwise no polygon to build.
    #[error("degenerate input: {reason}")]
    DegenerateInput { reason: String },

    #[error("invalid parameter: {reason}")]
    InvalidParameter { reason: String },

    #[error("invalid input: {reason}")]
    InvalidInput { reason: String },

    #[error("insufficient data: {reason}")]
    InsufficientData { reason: String },

    /// Detection requires strictly more points than the outlier budget.
    #[error("Size must be greater than outliers (n = {n}, k = {k})")]
    SizeNotGreaterThanOutliers { n: usize, k: usize },

    /// Covariance stayed singular after every ridge escalation.
    #[error("covariance matrix is singular and could not be regularized")]
    SingularCovariance,

    #[error("empty dataset: {path}")]
    EmptyDataset { path: String },

    #[error("parse error at {path}:{line}: {message}")]
    Parse {
        path: String,
        line: u64,
        message: String,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// A broken internal invariant; never expected on valid inputs.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code for the CLI: 1 for internal faults, 2 for usage and
    /// data errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Internal(_) => 1,
            _ => 2,
        }
    }
}
