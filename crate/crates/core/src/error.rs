use thiserror::Error;

/// Every failure the engine can report. Verdicts of `Unknown` are results,
/// not errors, and never appear here.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("base {0} is not supported (must be a prime)")]
    BaseNotSupported(u64),
    #[error("expected {expected} coordinates, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("promotion error: {0}")]
    Promotion(String),
    #[error("base mismatch: {0} vs {1}")]
    BaseMismatch(u64, u64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("exponent depth {0} exceeds the supported depth")]
    Depth(usize),
    #[error("magnitude error: {0}")]
    Magnitude(String),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("height error at line {line}, column {column}: {message}")]
    Height {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("literal {literal} is not an integer power of base {base}")]
    AtomNotPowerOfBase { literal: String, base: u64 },
    #[error("lowering error: {0}")]
    Lowering(String),
    #[error("corrupt checkpoint: {0}")]
    CorruptCheckpoint(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
