use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Binary exponent left the supported range of ±2^31.
    #[error("binary exponent overflow")]
    ExponentOverflow,

    #[error("division by zero")]
    DivisionByZero,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("index out of range: {what} = {index}, available up to {limit}")]
    OutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("series did not reach its stopping rule within {terms} terms")]
    Divergence { terms: usize },

    #[error("quadrature refinement did not settle within {panels} panels")]
    Convergence { panels: usize },

    #[error("cannot parse {0:?} as a number")]
    Parse(String),
}
