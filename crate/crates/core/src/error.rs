use thiserror::Error;

/// Errors raised by the library. Everything here is a caller mistake or a
/// corrupted input; the stochastic algorithms themselves never fail.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("genotype length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid parameter `{name}` = {value}: expected {expected}")]
    InvalidParameter {
        name: &'static str,
        value: String,
        expected: &'static str,
    },

    #[error("inconsistent trace at step {step}: {reason}")]
    Integrity { step: usize, reason: String },

    #[error("cannot parse genotype: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T: std::fmt::Display>(
    name: &'static str,
    value: T,
    expected: &'static str,
) -> Error {
    Error::InvalidParameter {
        name,
        value: value.to_string(),
        expected,
    }
}
