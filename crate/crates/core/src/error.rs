use crate::rootsys::RootSystemError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    /// Caller supplied parameters outside the supported range.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A resource bound (dimension, degree window) would be exceeded.
    #[error("resource bound exceeded: {0}")]
    Bound(String),
    /// An exact identity that must hold failed; this is a bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
