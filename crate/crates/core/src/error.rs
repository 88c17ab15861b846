use thiserror::Error;

/// Errors raised by curve construction, flow stepping, and analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    #[error("curve must be uniform in arc length; resample first ({0})")]
    NotUniform(String),
    #[error("winding number is not close to an integer: turning sum / 2pi = {0}")]
    WindingNotInteger(f64),
    #[error("linear solve failed: {0}")]
    Solver(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
