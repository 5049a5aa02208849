use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("empty vertex set")]
    EmptySet,
    #[error("graph has {n} vertices, size guard is {limit}")]
    SizeGuard { n: usize, limit: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("DIMACS line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
    #[error("map has length {got}, expected {expected}")]
    MapLength { got: usize, expected: usize },
    #[error("value {value} at vertex {vertex} out of range (limit {limit})")]
    MapValue { vertex: usize, value: usize, limit: usize },
    #[error("graph has an isolated vertex {0}")]
    IsolatedVertex(usize),
    #[error("wide-coloring check failed: {0}")]
    NotWide(String),
    #[error("construction inconsistency: {0}")]
    Internal(String),
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("certificate: {0}")]
    Certificate(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
