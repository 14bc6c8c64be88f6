use thiserror::Error;

/// Errors raised by the engine. Identity violations found by the checkers are
/// returned as report data, not as errors.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("unknown basis element `{0}`")]
    UnknownBasis(String),
    #[error("duplicate basis element `{0}`")]
    DuplicateBasis(String),
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("invalid truncation: {0}")]
    InvalidTruncation(String),
    #[error("truncation bound exceeded at degree {degree}: {context}")]
    BoundOverflow { degree: i64, context: String },
    #[error("unbounded growth: {0}")]
    Unbounded(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("coalgebra is not conilpotent within bounds")]
    NotConilpotent,
    #[error("coalgebra is not cocommutative")]
    NotCocommutative,
    #[error("contraction invariant violated: {0}")]
    ContractionInvariant(String),
    #[error("perturbation is not nilpotent within {0} steps")]
    NotNilpotent(usize),
    #[error("rank deficiency: {0}")]
    RankDeficiency(String),
    #[error("identity violated: {0}")]
    IdentityViolation(String),
    #[error("image escapes the primitives: {0}")]
    ImageEscape(String),
    #[error("hypothesis failure: {0}")]
    Hypothesis(String),
    #[error("missing provenance: {0}")]
    MissingProvenance(String),
    #[error("source algebra must be minimal: {0}")]
    NotMinimal(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
