use thiserror::Error;

#[derive(Debug, Error)]
pub enum LocqError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid code structure: {0}")]
    InvalidCode(String),

    /// The erasure cannot support an error with the requested syndrome.
    #[error("unsatisfiable cluster: {0}")]
    Unsatisfiable(String),

    #[error("residual has nonzero syndrome ({0} defects)")]
    NonzeroSyndrome(usize),

    #[error("{0}")]
    Mismatch(String),

    /// A decoder invariant was violated.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = LocqError> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> LocqError {
    LocqError::InvalidParameter(msg.into())
}
