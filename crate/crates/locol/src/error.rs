use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed input at line {line}: {what}")]
    Malformed { line: usize, what: String },
    #[error("missing `p lo3 <n> <m>` header")]
    MissingHeader,
    #[error("edge contains a repeated vertex")]
    RepeatedVertex,
    #[error("edge arity {0} not allowed")]
    BadArity(usize),
    #[error("vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { vertex: u32, n: usize },
    #[error("header declares {declared} edges but {actual} present")]
    EdgeCountMismatch { declared: usize, actual: usize },
    #[error("vertex {0} appears twice in colouring")]
    DuplicateVertex(u32),
    #[error("vertex {0} missing from colouring")]
    MissingVertex(u32),
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("instance admits no LO 2-colouring (promise violated)")]
    NotLo2Colourable,
    #[error("linear program infeasible for vertex {0} (promise violated)")]
    Infeasible(u32),
    #[error("no accepted sample after {0} retries")]
    RetriesExhausted(usize),
    #[error("rational solver requires at least 8 vertices, got {0}")]
    TooSmall(usize),
    #[error("coordinate {0} of the sampled vector is zero")]
    ZeroCoordinate(u32),
    #[error("brute-force threshold {given} exceeds limit {limit}")]
    BadThreshold { given: usize, limit: usize },
    #[error("instance with {0} vertices too large for exhaustive oracle")]
    InstanceTooLarge(usize),
    #[error("cannot form {requested} distinct planted edges (at most {available})")]
    InfeasibleGenerator { requested: usize, available: usize },
}
