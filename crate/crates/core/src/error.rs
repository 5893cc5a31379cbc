use thiserror::Error;

/// Error type shared by all evaluation routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation requested at (or numerically indistinguishable from) a
    /// singular point.
    #[error("singularity: {0}")]
    Singularity(String),

    /// Result would be dominated by cancellation or division by a value
    /// below the conditioning threshold.
    #[error("ill-conditioned: {0}")]
    Conditioning(String),

    /// A truncation parameter forces intermediate integers (or term counts)
    /// past what 64-bit arithmetic / the memory budget supports.
    #[error("truncation too large: {0}")]
    TruncationTooLarge(String),

    /// Argument past the binary64 exponent range for the requested function.
    #[error("overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
