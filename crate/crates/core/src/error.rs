use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("bad scalar {0:?}: expected `n` or `n/d` with d != 0")]
    Scalar(String),
    #[error("variable set mismatch: derivation has {expected} variables, element has {found}")]
    VariableMismatch { expected: usize, found: usize },
    #[error("element is not a constant: {0}")]
    NotConstant(String),
    #[error("derivation admits no grading compatible with its images")]
    NoGrading,
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("invalid derivation: {0}")]
    InvalidDerivation(String),
    #[error("element is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("{field}: {message}")]
    Schema { field: String, message: String },
}

impl Error {
    pub fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema { field: field.into(), message: message.into() }
    }
}
