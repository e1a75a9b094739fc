use thiserror::Error;

use crate::weyl::AlgebraId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{what} = {value} exceeds the limit {limit}")]
    SizeExceeded {
        what: &'static str,
        value: u64,
        limit: u64,
    },
    #[error("k must be a positive integer")]
    ZeroDegree,
    #[error("field extension degree must be positive")]
    ZeroExtension,
    #[error("input is not invariant under the {0} substitution group")]
    NonInvariantInput(AlgebraId),
    #[error("reduction for {algebra} did not strictly descend at exponent ({m}, {n})")]
    ReductionStall { algebra: AlgebraId, m: i64, n: i64 },
    #[error("formula for {algebra} at q = {q}, k = {k} evaluated to the non-integer {value}")]
    NonIntegralFormula {
        algebra: AlgebraId,
        q: u64,
        k: u64,
        value: String,
    },
    #[error("cannot combine maps of {0} and {1}")]
    AlgebraMismatch(AlgebraId, AlgebraId),
    #[error("{0} is not supported by this operation")]
    Unsupported(AlgebraId),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
