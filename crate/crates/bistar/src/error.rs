//! Error type shared across the toolkit.

/// Failure modes of disc-function construction and evaluation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Malformed input: unknown name, parameter out of range, empty data.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Input outside the operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural precondition on the input function was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Evaluation ran into a pole or essential singularity.
    #[error("singularity: {0}")]
    Singularity(String),

    /// `f'` vanished where local univalence is required.
    #[error("local univalence violated: {0}")]
    LocalUnivalence(String),

    /// The catalog entry does not support the requested operation.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// A numerical procedure failed to converge or produced non-finite values.
    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
