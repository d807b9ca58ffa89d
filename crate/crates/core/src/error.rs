use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MotzkinError {
    #[error("{engine}: requested {requested} terms, ceiling is {ceiling}")]
    ResourceLimit {
        engine: &'static str,
        requested: u64,
        ceiling: u64,
    },

    /// The holonomic recurrence produced a nonzero remainder. This is a bug,
    /// never a property of the input.
    #[error("inexact division in holonomic recurrence at n = {n}")]
    InexactDivision { n: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid set spec: {0}")]
    InvalidSpec(String),

    #[error("unknown selector `{0}`")]
    UnknownSelector(String),
}

pub type Result<T> = std::result::Result<T, MotzkinError>;
