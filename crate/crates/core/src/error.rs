use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("generator: {0}")]
    Generator(String),
    #[error("division by zero in F_{0}")]
    DivisionByZero(u32),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("search bug: {0}")]
    SearchBug(String),
    #[error("oracle cap exceeded: {0}")]
    OracleCap(String),
    #[error("precondition: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
