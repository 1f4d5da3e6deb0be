use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("morphisms at objects {0} and {1} are not composable")]
    NotComposable(usize, usize),
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("enumeration refused: {size} morphisms exceeds the guard of {guard}")]
    Guard { size: usize, guard: usize },
    #[error("{0}")]
    Op(String),
    #[error("step {step}: {msg}")]
    Step { step: usize, msg: String },
    #[error("engine: {0}")]
    Engine(String),
    #[error("unknown protocol `{0}`")]
    UnknownProtocol(String),
}

impl Error {
    pub(crate) fn parse(err: serde_json::Error) -> Self {
        Error::Parse { line: err.line(), column: err.column(), msg: err.to_string() }
    }
}
