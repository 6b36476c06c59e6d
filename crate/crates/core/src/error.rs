use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("scalars from different fields Q(sqrt {0}) and Q(sqrt {1})")]
    MismatchedField(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a square-free discriminant > 1")]
    BadDiscriminant(u32),
    #[error("index n = {0} has no quadratic Jones index (supported: 2, 3)")]
    UnsupportedIndex(u32),
    #[error("too many strands: {0} (at most 6)")]
    TooManyStrands(usize),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("action mismatch: {0}")]
    ActionMismatch(String),
    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),
    #[error("embedding failure: {0}")]
    EmbeddingFailure(String),
    #[error("base mismatch: {0}")]
    BaseMismatch(String),
    #[error("map is not well defined on the quotient: {0}")]
    IllDefined(String),
    #[error("not a single matrix block: {0}")]
    NotSingleBlock(String),
    #[error("singular system: {0}")]
    Singular(String),
    #[error("inconsistent ranks: {0}")]
    InconsistentRanks(String),
    #[error("floor mismatch: {0}")]
    FloorMismatch(String),
    #[error("not a split semisimple algebra: {0}")]
    NotSplit(String),
    #[error("no solution")]
    NoSolution,
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
