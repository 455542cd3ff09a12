use thiserror::Error;

/// Errors raised by the combinatorial primitives, the searches and the
/// certificate layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("value {value} at position {position} is outside 0..={level}")]
    ValueOutOfRange { position: usize, value: u32, level: u8 },

    #[error("level mismatch: expected {expected}, found {found}")]
    LevelMismatch { expected: u8, found: u8 },

    #[error("width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("supports are not block ordered: {0}")]
    SupportOrder(String),

    #[error("element {0} does not attain its level")]
    NotAttaining(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("operation index {index} out of range for level {level}")]
    OperationOutOfRange { index: u8, level: u8 },

    #[error("corrupted term representation: {0}")]
    CorruptTerm(String),

    #[error("coloring oracle failed on {object}: {reason}")]
    Oracle { object: String, reason: String },

    #[error("missing coloring source: {0}")]
    MissingColoring(String),

    #[error("not an epimorphism: {0}")]
    NotEpimorphism(String),

    #[error("budget exceeded after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
