use thiserror::Error;

use crate::scalar::FieldTag;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("the variable q is not allowed in field Q")]
    VariableInRationals,
    #[error("unknown field tag {0:?} (expected \"Q\" or \"Qq\")")]
    UnknownField(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldTag, right: FieldTag },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("leg {leg} used twice in placement")]
    LegCollision { leg: usize },
    #[error("leg {leg} out of range for {total} legs")]
    LegOutOfRange { leg: usize, total: usize },
    #[error("singular matrix ({what}): rank {rank} < {size}")]
    Singular {
        what: &'static str,
        rank: usize,
        size: usize,
    },
    #[error("missing Hopf data: {0}")]
    MissingHopfData(&'static str),
    #[error("invalid structure constants: {0}")]
    InvalidConstants(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("series argument has a degree-0 term")]
    DegreeZeroTerm,
    #[error("closure violated: {0}")]
    Closure(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("unknown example {0:?} (expected trivial, s3 or zn:<n> with 1 <= n <= 12)")]
    UnknownExample(String),
    #[error("invalid file at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
