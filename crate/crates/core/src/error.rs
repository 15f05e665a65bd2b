use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IcgError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid divisors for n = {n}: {offenders:?} (each must divide n and be in [1, n))")]
    InvalidDivisors { n: u64, offenders: Vec<u64> },

    #[error("duplicate divisors for n = {n}: {duplicates:?}")]
    DuplicateDivisors { n: u64, duplicates: Vec<u64> },

    #[error("divisor set must not be empty")]
    EmptyDivisorSet,

    /// An enumeration or oracle would exceed a configured cap.
    #[error("resource limit: {0}")]
    Resource(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

impl IcgError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        IcgError::Domain(msg.into())
    }

    /// True for errors caused by malformed user input rather than caps or arithmetic.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            IcgError::Domain(_)
                | IcgError::InvalidDivisors { .. }
                | IcgError::DuplicateDivisors { .. }
                | IcgError::EmptyDivisorSet
        )
    }
}

pub type Result<T> = std::result::Result<T, IcgError>;
