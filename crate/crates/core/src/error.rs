use thiserror::Error;

/// Broad failure category, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input or a violated precondition.
    Input,
    /// A mathematical check failed.
    Verification,
    /// A scan budget or extension cap was exhausted.
    Budget,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("polynomial is not homogeneous (degrees {0} and {1} both occur)")]
    Inhomogeneous(u32, u32),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("scan budget exceeded: field with {size} elements exceeds budget {budget}")]
    ScanBudgetExceeded { size: u64, budget: u64 },
    #[error("extension cap exhausted: {0}")]
    ExtensionCap(String),
    #[error("invalid monad: {0}")]
    InvalidMonad(String),
    #[error("saturation did not stabilize at twist {twist}")]
    SaturationUnstable { twist: i64 },
    #[error("splitting window assertion failed: {0}")]
    WindowAssertion(String),
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(
        "all intersection points are Eckardt points ({eckardt} Eckardt points, no two-line point)"
    )]
    AllIntersectionsEckardt { eckardt: usize },
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("no valid point: {0}")]
    NoValidPoint(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::ScanBudgetExceeded { .. }
            | Error::ExtensionCap(_)
            | Error::SearchExhausted(_) => ErrorKind::Budget,
            Error::Verification(_)
            | Error::Integrity(_)
            | Error::AllIntersectionsEckardt { .. }
            | Error::NoValidPoint(_)
            | Error::SaturationUnstable { .. }
            | Error::WindowAssertion(_) => ErrorKind::Verification,
            _ => ErrorKind::Input,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
