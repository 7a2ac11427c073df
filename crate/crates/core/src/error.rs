use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("family does not span: rank {rank} < expected {expected}")]
    DoesNotSpan { rank: usize, expected: usize },
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("missing length for edge ({0}, {1})")]
    MissingLength(usize, usize),
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    #[error("inadmissible node set: {0}")]
    Inadmissible(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
