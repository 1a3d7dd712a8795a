use thiserror::Error;

use crate::padic::PrimeContext;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("precision must be at least one digit")]
    ZeroPrecision,

    #[error("division by zero")]
    DivisionByZero,

    #[error("prime context mismatch: {left} vs {right}")]
    ContextMismatch {
        left: PrimeContext,
        right: PrimeContext,
    },

    #[error("operation not supported for p = {0}")]
    UnsupportedPrime(u32),

    #[error("leading coefficient is zero; use the linear solver")]
    DegenerateLeadingCoefficient,

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("invalid map parameters: {0}")]
    InvalidParams(String),

    /// Evaluation at the pole `-1/b`.
    #[error("evaluation at the pole")]
    PoleHit,

    #[error("operation does not apply to this case: {0}")]
    WrongCase(String),

    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("residue model invalid: {0}")]
    ResidueModelInvalid(String),

    #[error("balls of the invariant set candidate intersect: {0}")]
    DisjointnessFailure(String),
}
