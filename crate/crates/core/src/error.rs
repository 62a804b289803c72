use thiserror::Error;

/// Errors raised by the group, hom and cover computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-contract input (dimension mismatch, non-prime, non-member, ...).
    #[error("input error: {0}")]
    Input(String),
    /// The subgroup is not pure, so the quotient would have torsion.
    #[error("purity error: {0}")]
    Purity(String),
    /// The result would be divisible at infinitely many primes (e.g. a whole subspace).
    #[error("not of finite type: {0}")]
    NotFiniteType(String),
    /// A requested preimage does not exist.
    #[error("surjectivity error: {0}")]
    Surjectivity(String),
    /// A construction failed its own post-condition check.
    #[error("construction error: {0}")]
    Construction(String),
    /// The pair does not form a cellular cover where one is required.
    #[error("cover error: {0}")]
    Cover(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
