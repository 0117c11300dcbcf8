use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    #[error("invalid variable context: {0}")]
    InvalidContext(String),

    #[error("the unit ideal has no resolution of a proper quotient")]
    UnitIdeal,

    #[error("the zero ideal is not allowed here")]
    ZeroIdeal,

    #[error("{gens} generators exceed the Taylor complex cap of {cap}")]
    TaylorTooLarge { gens: usize, cap: usize },

    #[error("complex is not minimal: unit entry in d_{position} at ({row}, {col})")]
    NotMinimal {
        position: usize,
        row: usize,
        col: usize,
    },

    #[error("malformed complex: {0}")]
    MalformedComplex(String),

    #[error("no substitution ideal for block {block} in degree {degree}")]
    MissingSubstitution { block: String, degree: u32 },

    #[error("substitution ideal for block {block} degree {degree} has generator {witness} of the wrong degree")]
    WrongDegree {
        block: String,
        degree: u32,
        witness: String,
    },

    #[error("nesting violated in block {block}: {witness} lies in the degree {high} ideal but not in the degree {low} ideal")]
    NestingViolation {
        block: String,
        high: u32,
        low: u32,
        witness: String,
    },

    #[error("invalid substitution ideal for block {block} degree {degree}: {reason}")]
    InvalidSubstitution {
        block: String,
        degree: u32,
        reason: String,
    },

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("invalid instance document: {0}")]
    Document(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
