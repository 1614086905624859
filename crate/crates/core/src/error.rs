//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("extension degree must be >= 1, got {0}")]
    BadExtensionDegree(i64),

    #[error("field size {q} exceeds the configured limit {limit}")]
    FieldTooLarge { q: u64, limit: u64 },

    #[error("inversion of zero")]
    ZeroInversion,

    #[error("discrete log of zero")]
    ZeroDiscreteLog,

    #[error("operands belong to different fields")]
    FieldMismatch,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("monomial basis size {size} exceeds the configured limit {limit}")]
    BasisTooLarge { size: u64, limit: u64 },

    #[error("lambda must be a unit (nonzero)")]
    ZeroLambda,

    #[error("the zero polynomial defines no hypersurface")]
    ZeroPolynomial,

    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    BudgetExceeded {
        what: String,
        needed: u128,
        limit: u128,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("checkpoint parameters do not match the requested run: {0}")]
    CheckpointMismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
