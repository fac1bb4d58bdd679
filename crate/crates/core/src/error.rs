//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by the slope machinery.
///
/// `Parse` covers text-format failures; everything else is a domain error
/// (a value outside an operation's precondition, or an internal cap).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("indeterminate fraction 0/0")]
    Indeterminate,
    #[error("slope out of range: {0}")]
    SlopeOutOfRange(String),
    #[error("invalid continued fraction: {0}")]
    InvalidContinuedFraction(String),
    #[error("the continued fraction [1] has no predecessor")]
    NoPredecessor,
    #[error("{0} and {1} are not Farey neighbors")]
    NotFareyNeighbors(String, String),
    #[error("value too large: {0}")]
    TooLarge(String),
    #[error("empty pattern")]
    EmptyPattern,
    #[error("word must be nonempty and cyclically reduced")]
    NotCyclicallyReduced,
    #[error("orbit reduction ran out of fuel after {0} reflections")]
    FuelExhausted(u64),
}

impl Error {
    /// True for failures of the text formats, false for domain errors.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}
