use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("invalid number `{0}`")]
    Number(String),
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("invalid map: {0}")]
    Map(String),
    #[error("invalid mobile: {0}")]
    Mobile(String),
    #[error("invalid value: {0}")]
    Invalid(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(String, String),
    #[error("monomial {0} lies outside truncation {1}")]
    OutOfTruncation(String, String),
    #[error("invalid truncation: {0}")]
    InvalidTruncation(String),
    #[error("fixed-point iteration did not converge after {0} steps (update is not contracting)")]
    NotConverged(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundaryError {
    #[error("p must be at least 2, got {0}")]
    InvalidP(u32),
    #[error("at least one boundary is required")]
    NoBoundary,
    #[error("boundary degrees must be positive")]
    ZeroDegree,
    #[error("boundary degrees sum to {sum}, which is not a multiple of p = {p}")]
    ResidueSum { p: u32, sum: u64 },
    #[error(
        "unsupported boundary parity: {count} boundaries are not multiples of p = {p}; \
         only 0 or 2 are covered (four or more odd boundaries is an open case)"
    )]
    UnsupportedParity { p: u32, count: usize },
    #[error("too many vertices requested for a map with these boundaries")]
    NoVertices,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("number of darts must be even and positive, got {0}")]
    OddDarts(usize),
    #[error("sigma is not a permutation of 0..{0}")]
    NotPermutation(usize),
    #[error("map is not connected")]
    Disconnected,
    #[error("map has genus {0}, expected a planar map")]
    NotPlanar(usize),
    #[error("vertex {0} does not exist")]
    NoSuchVertex(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BijectionError {
    #[error("invalid choice index {index} at step {step} ({available} options)")]
    InvalidChoice { step: usize, index: usize, available: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
}

/// Crate-wide error, used by the verification driver and the CLI.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Bijection(#[from] BijectionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}
