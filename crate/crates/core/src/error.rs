//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("coefficient not representable in the field: {0}")]
    NotRepresentable(String),
    #[error("field mismatch between operands")]
    FieldMismatch,
    #[error("variable list mismatch between operands")]
    VariableMismatch,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("characteristic too small: need p > {needed}, have p = {have}")]
    CharacteristicTooSmall { needed: i64, have: u64 },
    #[error("target degree {target} too small (degree present: {present})")]
    DegreeTooSmall { target: i64, present: i64 },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("matrix is not symmetric (entries ({0},{1}) and ({1},{0}) differ)")]
    Asymmetric(usize, usize),
    #[error("entry ({i},{j}) must be homogeneous of degree {expected}, found {found}")]
    WrongEntryDegree {
        i: usize,
        j: usize,
        expected: i64,
        found: String,
    },
    #[error("determinant is identically zero")]
    ZeroDeterminant,
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("arity mismatch: expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("discriminant is not squarefree")]
    NotSquarefree,
    #[error("normalization line is degenerate: {0}")]
    BadLine(String),
    #[error("square classes live on different curves")]
    CurveMismatch,
    #[error("representative has odd degree (normalization bug)")]
    OddDegreeRepresentative,
    #[error("bad reduction modulo {0}")]
    BadReduction(u64),
    #[error("isotropy of the subbundle is not certified")]
    IsotropyNotCertified,
    #[error("kernel dimension {found}, expected {expected} (non-generic input)")]
    KernelDimension { expected: usize, found: usize },
    #[error("reduced size would be {0}, need at least 1")]
    SizeTooSmall(i64),
    #[error("map drops rank generically: {0}")]
    RankDeficient(String),
    #[error("no symmetric lift exists for the requested extension pattern")]
    LiftFailed,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("residue minor divisible by the discriminant after all tries")]
    MinorAlwaysDivisible,
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
