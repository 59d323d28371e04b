use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("event system has {count} events, limit is {limit}")]
    EventLimitExceeded { count: usize, limit: usize },

    #[error("assignment has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("unsupported scenario: {0}")]
    UnsupportedScenario(String),

    #[error("polytope too large: {0}")]
    SizeLimitExceeded(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero variance in variable {0}")]
    ZeroVariance(usize),

    #[error("marginal of variable {0} is not balanced")]
    UnbalancedMarginal(usize),

    #[error("triple ({0}, {1}, {2}) is not in the elliptope")]
    NotInElliptope(f64, f64, f64),

    #[error("k = {k} exceeds the cap {cap}")]
    KTooLarge { k: usize, cap: usize },

    #[error("ticket set is empty")]
    EmptyTicketSet,

    #[error("region is empty")]
    EmptyRegion,

    #[error("invalid spin: {0}")]
    InvalidSpin(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
