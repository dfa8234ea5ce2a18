use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("gadget length {got} too small, need at least {required}")]
    GadgetTooShort { got: usize, required: usize },

    #[error("graph has an isolated vertex {0}")]
    IsolatedVertex(usize),

    #[error("input graph contains a cycle")]
    NotAcyclic,

    #[error("unknown decoder \"{0}\"")]
    UnknownDecoder(String),

    #[error("unsupported dump version {found}, expected {expected}")]
    VersionMismatch { found: u64, expected: u64 },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("malformed connection model: {0}")]
    MalformedModel(String),

    #[error("predicate graph has {predicate} vertices but labels cover {labels}")]
    GraphMismatch { predicate: usize, labels: usize },

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
