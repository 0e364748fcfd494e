use thiserror::Error;

/// Errors raised while building or validating algebraic structures.
///
/// Verifiers never fail with these; they return reports. Constructors and
/// solvers do.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    #[error("unsupported structure: {0}")]
    Unsupported(String),

    #[error("not co-involutive: {0}")]
    NotCoinvolutive(String),

    #[error("universality failure: {0}")]
    Universality(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape(msg: impl Into<String>) -> Error {
    Error::Shape(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
