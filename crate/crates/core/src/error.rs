use thiserror::Error;

/// Errors raised by the computational core.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by the zero rational function")]
    DivisionByZero,

    #[error("polynomial division is not exact: {0}")]
    InexactDivision(String),

    #[error("denominator is not invertible as a power series in v: lowest term {0}")]
    NotInvertible(String),

    #[error("invalid Cartan type: {0}")]
    InvalidType(String),

    #[error("group {name} has {order} elements, above the enumeration bound {bound}")]
    GroupTooLarge { name: String, order: u128, bound: usize },

    #[error("type mismatch: {0} vs {1}")]
    TypeMismatch(String, String),

    #[error("generator index {index} out of range for {name}")]
    BadGenerator { index: i64, name: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("trace system for {name} has rank defect {defect} ({unknowns} unknowns)")]
    RankDefect { name: String, defect: usize, unknowns: usize },

    #[error("trace system for {name} is inconsistent: {detail}")]
    Inconsistent { name: String, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid data: {0}")]
    Data(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Data(e.to_string())
    }
}
