use thiserror::Error;

/// Failures surfaced by library operations. `Invariant` means a bug on our
/// side (an internal consistency check failed), everything else is a problem
/// with the input or with configured resource limits.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invalid partition: {0}")]
    Partition(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("resource cap exceeded: {what} needs about {estimate}, cap is {cap}")]
    CapExceeded {
        what: String,
        estimate: String,
        cap: String,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
    pub fn partition(msg: impl Into<String>) -> Self {
        Error::Partition(msg.into())
    }
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
    pub fn cap(what: impl Into<String>, estimate: impl ToString, cap: impl ToString) -> Self {
        Error::CapExceeded {
            what: what.into(),
            estimate: estimate.to_string(),
            cap: cap.to_string(),
        }
    }

    /// Process exit code this error maps to at the CLI boundary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) => 1,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Shape(_) => "shape",
            Error::Partition(_) => "partition",
            Error::FieldMismatch(_) => "field-mismatch",
            Error::Parse(_) => "parse",
            Error::CapExceeded { .. } => "cap-exceeded",
            Error::Precondition(_) => "precondition",
            Error::Invariant(_) => "invariant",
            Error::Io(_) => "io",
        }
    }
}
