use thiserror::Error;

/// Errors produced by the constant evaluators, the sieve and the checks.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("cannot factor {n}: exceeds the square of the factor-sieve limit {limit}")]
    Factoring { n: u64, limit: u64 },
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("dataset covers integers up to {have}, query needs {need}")]
    Coverage { need: f64, have: u64 },
    #[error("invalid cache file: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
