use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value {0} is outside [0, 1]")]
    OutOfRange(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("unsupported connective: {0}")]
    UnsupportedConnective(String),

    #[error("universe mismatch: {0}")]
    UniverseMismatch(String),

    #[error("property {property} does not apply to {subject}")]
    PropertyMismatch { property: String, subject: String },

    #[error("arity mismatch: {0}")]
    Arity(String),

    #[error("invalid grid step {0}; expected a value in (0, 0.5]")]
    InvalidGridStep(f64),

    #[error("empty fuzzy input: {0}")]
    EmptyInput(String),

    #[error("decomposition failed: {0}")]
    Decomposition(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("product universe of {cells} cells exceeds the cap of {cap} cells")]
    Explosion { cells: u128, cap: u64 },
}

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed or inconsistent input data.
    Input,
    /// Well-formed input asking for something the theory does not support.
    Semantic,
    /// Product-universe size cap exceeded.
    Explosion,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::OutOfRange(_) | Error::Parse(_) | Error::Validation(_) => ErrorClass::Input,
            Error::Explosion { .. } => ErrorClass::Explosion,
            _ => ErrorClass::Semantic,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
