use thiserror::Error;

/// Errors produced while parsing inputs or validating domain objects.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{file}:{line}: {msg}")]
    Parse {
        file: String,
        line: usize,
        msg: String,
    },
    #[error("cycle detected")]
    CycleDetected,
    #[error("empty label for node {0}")]
    EmptyLabel(String),
    #[error("unknown node {0} referenced by an edge")]
    UnknownNode(String),
    #[error("duplicate segment id {0}")]
    DuplicateSegment(String),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),
    #[error("self loop on node {0}")]
    SelfLoop(String),
    #[error("reserved delimiter byte in {0}")]
    DelimiterInInput(String),
    #[error("invalid offsets for graph substring")]
    InvalidOffsets,
    #[error("invalid path cover: {0}")]
    InvalidCover(String),
    #[error("unordered chain")]
    UnorderedChain,
    #[error("anchor references unknown node {0}")]
    UnknownAnchorNode(String),
    #[error("enumeration limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
