use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("index out of range: {what} (valid range {valid})")]
    IndexOutOfRange { what: String, valid: String },

    #[error("lambda evaluated at zero while a negative lambda power is present")]
    ZeroLambda,

    #[error("closed form is only defined for homogeneous problems (c must be absent)")]
    HomogeneousOnly,

    #[error("resource limit exceeded: {what} requested {requested}, limit {limit}")]
    ResourceLimit { what: String, requested: u64, limit: u64 },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("missing coefficient {name} at index {index}")]
    MissingCoefficient { name: String, index: String },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(what: impl Into<String>, valid: impl Into<String>) -> Error {
    Error::IndexOutOfRange { what: what.into(), valid: valid.into() }
}

pub(crate) fn check_limit(what: &str, requested: u64, limit: u64) -> Result<()> {
    if requested > limit {
        Err(Error::ResourceLimit { what: what.to_string(), requested, limit })
    } else {
        Ok(())
    }
}
