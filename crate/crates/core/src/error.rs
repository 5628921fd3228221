use thiserror::Error;

use crate::scalar::Cplx;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cannot combine exact and approximate series")]
    RegimeMismatch,

    #[error("coefficient list too short: {len} entries, need at least {min}")]
    TooShort { len: usize, min: usize },

    /// The leading recurrence polynomial vanishes where it must be inverted.
    #[error("singular recurrence: leading coefficient q_{order}(n) vanishes at n = {n}")]
    SingularIndex { n: usize, order: usize },

    #[error("initial values underdetermined: {missing} degree(s) of freedom left unassigned")]
    Underdetermined { missing: usize },

    #[error("initial values inconsistent with the recurrence prefix constraints")]
    Inconsistent,

    #[error("free value a{index} is outside the initial block a0..a{}", .block.saturating_sub(1))]
    FreeIndexOutOfRange { index: usize, block: usize },

    #[error("evaluation overflowed at term index {index}")]
    EvaluationOverflow { index: usize },

    #[error("evaluation did not converge at z = {z} after {terms} terms")]
    NotConverged { z: String, terms: usize },

    /// A denominator vanishes at a point the computation needs.
    #[error("pole or indeterminacy at z = {at}: {what}")]
    Pole { at: String, what: String },

    #[error("continuation needs {steps} backward steps, cap is {cap}")]
    DepthExceeded { steps: usize, cap: usize },

    #[error("growth fit needs {needed}: {reason}")]
    InsufficientProfile { needed: String, reason: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn pole(at: &Cplx, what: impl Into<String>) -> Self {
        Error::Pole { at: at.to_string(), what: what.into() }
    }
}
