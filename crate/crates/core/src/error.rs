//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("the construction requires q >= 27, i.e. k >= 1 (got k = {k})")]
    FieldTooSmall { k: i64 },

    #[error("invalid field element: {0}")]
    InvalidElement(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("operands belong to different field specifications")]
    MixedField,

    #[error("cyclotomic conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u64, right: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("element is not in the group: {0}")]
    NotInGroup(String),

    #[error("no consistent class labeling matches the brute-force structure constants")]
    NoConsistentLabeling,

    #[error("non-integral structure constant at {cell}: {value}")]
    NonIntegral { cell: String, value: String },

    #[error("unresolvable product cell: {0}")]
    UnresolvableCell(String),

    #[error("attempted to read an unknown character value directly: {0}")]
    UnknownValue(String),

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("unknown label: {0}")]
    UnknownLabel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
