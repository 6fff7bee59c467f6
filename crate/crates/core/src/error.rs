use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An element does not belong to the carrier it was used with.
    #[error("domain error: {0}")]
    Domain(String),

    /// An input failed one of the algebraic checks (axiom, closure, homomorphism law).
    #[error("validation error: {what}{}", witness.as_ref().map(|w| format!(" (witness: {w})")).unwrap_or_default())]
    Validation { what: String, witness: Option<String> },

    /// A configured enumeration cap or search budget was exceeded.
    #[error("resource limit: {0}")]
    Resource(String),

    /// The construction exists mathematically but is not computable with the available backends.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn validation(what: impl Into<String>) -> Self {
        Error::Validation {
            what: what.into(),
            witness: None,
        }
    }

    pub fn validation_with(what: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::Validation {
            what: what.into(),
            witness: Some(witness.into()),
        }
    }

    pub fn domain(what: impl Into<String>) -> Self {
        Error::Domain(what.into())
    }

    pub fn unsupported(what: impl Into<String>) -> Self {
        Error::Unsupported(what.into())
    }
}
