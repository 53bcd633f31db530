use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input that cannot be interpreted as a rotation system at all.
    #[error("malformed triangulation: {0}")]
    Structural(String),

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    /// Two independent computations of the same quantity disagreed.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}

pub(crate) fn parameter(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
