//! Error types shared by every module of the crate.

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation
    /// (negative radius, non-finite input, zero band-limit, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Array lengths or parameter sets of two operands do not match.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// An iterative numerical procedure failed to converge.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Inconsistent configuration (tiling parameters, scale ranges, ...).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A documented precondition of the operation is violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed file content; `offset` is the byte position of the problem.
    #[error("file format error at byte {offset}: {message}")]
    Format { offset: u64, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
}
