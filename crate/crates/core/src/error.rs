use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field exponent must be at least 1")]
    ZeroExponent,
    #[error("field of order {p}^{e} exceeds the 2^20 size cap")]
    FieldTooLarge { p: u64, e: u32 },
    #[error("element index {index} is outside GF({q})")]
    InvalidElement { index: u64, q: u64 },
    #[error("inverse of zero")]
    InverseOfZero,
    #[error("operation requires odd characteristic")]
    EvenCharacteristic,
    #[error("operation requires even characteristic")]
    OddCharacteristic,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coefficient table is not in unique representation: {0}")]
    InvalidCoefficients(String),
    #[error("enumeration of {needed} items exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("inconsistent rank/type: {0}")]
    InconsistentRankType(String),
    #[error("zero coefficient in diagonal form")]
    ZeroCoefficient,
    #[error("substitution matrix is singular")]
    SingularSubstitution,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("inconsistent coset query: {0}")]
    InconsistentQuery(String),
    #[error("coset weight multisets of RM_q(1,m) are undefined for q = 2")]
    UnsupportedForBinary,
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inexact division in closed formula: {0}")]
    InexactDivision(String),
    #[error("weight {weight} is not divisible by q-1 = {divisor}")]
    NonDivisibleWeight { weight: u64, divisor: u64 },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl Error {
    /// True for errors that signal a broken invariant inside the library
    /// (formula transcription errors, failed double-entry checks) rather
    /// than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::InexactDivision(_) | Error::NonDivisibleWeight { .. } | Error::Inconsistent(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
