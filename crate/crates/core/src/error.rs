use thiserror::Error;

/// Every failure the library reports. The CLI maps these onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid type: {0}")]
    InvalidType(String),

    #[error("Weyl group of {ty} is too large: rank {rank} exceeds the cap {cap}")]
    GroupTooLarge { ty: String, rank: usize, cap: usize },

    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: String, found: String },

    #[error("invalid weight {weight:?}: {reason}")]
    InvalidWeight { weight: Vec<i64>, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("ambiguous phase for row {weight:?}: 0-column entry {re:e}{im:+e}i")]
    AmbiguousPhase { weight: Vec<i64>, re: f64, im: f64 },

    #[error("{label} is not unitary: deviation {deviation:e}")]
    NotUnitary { label: String, deviation: f64 },

    #[error("division by a vanishing 0-column entry in row {row}")]
    ZeroColumn { row: usize },

    #[error("non-integral rank {re}{im:+}i (residual {residual:e})")]
    NonIntegralRank { re: f64, im: f64, residual: f64 },

    #[error("structure constant {re}{im:+}i is off the lattice (residual {residual:e})")]
    NonIntegralConstant { re: f64, im: f64, residual: f64 },

    #[error("negative rank {0}")]
    NegativeRank(i64),

    #[error("invalid cover spec: {0}")]
    InvalidSpec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
