use thiserror::Error;

/// Errors shared by every module of the workbench.
#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied arguments outside an operation's domain.
    #[error("input error: {0}")]
    Input(String),

    /// A code or family file could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An exhaustive enumeration would exceed its configured cap.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// Attack parameters cannot be instantiated for the requested (n, L, R, eps).
    #[error("parameterization error: {0}")]
    Parameterization(String),

    /// A randomized construction did not yield a usable object.
    #[error("construction failed: {0}")]
    Construction(String),

    /// A guarantee that should hold by construction was violated.
    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
