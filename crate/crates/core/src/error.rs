use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p is not prime: {0}")]
    NotPrime(u64),

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The operation needs q ≡ 1 (mod 3) (or p ≡ 1 (mod 3)) and the field does not qualify.
    #[error("unsupported field q = {q}: {reason}")]
    UnsupportedField { q: u64, reason: &'static str },

    #[error("division by zero")]
    DivisionByZero,

    #[error("enumeration needs {needed} points but the budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    /// A self-check failed. Seeing this means a bug, not bad input.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
