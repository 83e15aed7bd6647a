use thiserror::Error;

/// Errors raised by the library.
///
/// Variants split into two families that the command-line front end maps to
/// different exit codes: caller mistakes (`Usage`, `Precondition`,
/// `OrderMismatch`, `LimitExceeded`) and bad or out-of-range data (`Domain`,
/// `Parse`, `NotInvertible`).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("truncation orders differ ({left} vs {right}); re-truncate to the minimum first")]
    OrderMismatch { left: usize, right: usize },
    #[error("{what} exceeds the hard limit of {limit} (got {got}); {hint}")]
    LimitExceeded {
        what: &'static str,
        limit: usize,
        got: usize,
        hint: &'static str,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division error: {0}")]
    NotInvertible(String),
}

impl Error {
    /// True for errors caused by how the caller invoked an operation, as
    /// opposed to the data it was invoked on.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Usage(_)
                | Error::Precondition(_)
                | Error::OrderMismatch { .. }
                | Error::LimitExceeded { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
