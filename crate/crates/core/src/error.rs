use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph order {0} exceeds the supported maximum of 64")]
    OrderTooLarge(usize),
    #[error("vertex {vertex} out of range for a graph on {order} vertices")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("Ramsey type ({s},{t}) needs both bounds at least 2")]
    InvalidRamseyType { s: usize, t: usize },
    #[error("malformed graph6 input: {0}")]
    Graph6(String),
    #[error("automorphism search limited to {limit} vertices, got {order}")]
    SizeLimit { order: usize, limit: usize },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("catalog mismatch: {0}")]
    CatalogMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("resource limit exceeded: {reason}")]
    ResourceLimit {
        reason: String,
        checkpoint: Option<PathBuf>,
    },
    #[error("missing table entry R({0},{1})")]
    MissingTableEntry(usize, usize),
    #[error("inconsistent reference constants for degree {degree}: {detail}")]
    InconsistentReference { degree: usize, detail: String },
    #[error("unknown predicate: {0}")]
    UnknownPredicate(String),
    #[error("malformed assignment: {0}")]
    MalformedAssignment(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
