use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    /// A sign, zero test or valuation needed information beyond the
    /// certified window of a truncated series.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("square root of a negative element")]
    NegativeRadicand,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("not supported by the backend: {0}")]
    NotSupported(String),
    #[error("element is not in the valuation ring")]
    NotInRing,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

impl Error {
    pub(crate) fn precision(context: impl Into<String>) -> Self {
        Error::PrecisionExhausted(context.into())
    }
}
