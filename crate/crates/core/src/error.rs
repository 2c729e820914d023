use thiserror::Error;

/// Errors surfaced by the library. Verification failures are not errors; they
/// are reported as verdicts.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input shape mismatch: expected {expected} bits, got {got}")]
    InputShape { expected: usize, got: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid shape: {0}")]
    Shape(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: {msg}")]
    Semantic { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
