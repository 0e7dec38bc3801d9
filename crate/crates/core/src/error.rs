use thiserror::Error;

/// Errors raised by the revival library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A quantum number or parameter outside the domain of a model.
    #[error("domain error: {0}")]
    Domain(String),
    /// A computation produced a non-finite or otherwise unusable value.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// Invalid construction parameters.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// A query outside the sampled range.
    #[error("range error: {0}")]
    Range(String),
    #[error("unknown {kind} `{name}` (known: {known})")]
    Unknown {
        kind: &'static str,
        name: String,
        known: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
