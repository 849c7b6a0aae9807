use thiserror::Error;

/// Errors produced by stream handling, sketches, generators and the CLI plumbing.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid edge ({u}, {v}) for n = {n}")]
    InvalidEdge { n: u32, u: u32, v: u32 },

    #[error("illegal stream at element {index}: {reason}")]
    IllegalStream { index: usize, reason: String },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: u64, dim: u64 },

    #[error("incompatible sketches: {0}")]
    IncompatibleSketches(String),

    #[error("malformed sketch blob: {0}")]
    Codec(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("generator error: {0}")]
    Gen(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
