use thiserror::Error;

#[derive(Debug, Error)]
pub enum KdcError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("malformed candidate set: {0}")]
    MalformedCandidates(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("parse error on line {line}: {msg}")]
    ParseLine { line: usize, msg: String },
    #[error("schema mismatch: {0}")]
    Schema(String),
    #[error("instance too large for exhaustive search: n = {n} exceeds {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("generation failed: {0}")]
    Generation(String),
    #[error("unknown {kind} {name:?}; known: {known}")]
    Unknown { kind: &'static str, name: String, known: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = KdcError> = std::result::Result<T, E>;
