use thiserror::Error;

use crate::fan::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix has {got} entries, expected {rows}x{cols}")]
    Shape { rows: usize, cols: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("the zero vector is not a valid ray")]
    ZeroRay,

    #[error("invalid fan: {0}")]
    InvalidFan(ValidationReport),

    #[error("not a generalized weighted projective space: {rays} rays in rank {rank}")]
    NotGwps { rays: usize, rank: usize },

    #[error("ray relation {0:?} has entries of mixed sign")]
    MixedSignRelation(Vec<String>),

    #[error("invalid weight system: {0}")]
    InvalidWeights(String),

    #[error("weights {0:?} are not well formed")]
    NotWellFormed(Vec<u64>),

    #[error("invalid superlattice: {0}")]
    InvalidLattice(String),

    #[error("invalid exponent vector: {0}")]
    InvalidExponents(String),

    #[error("witness divisor has class {actual}, expected {expected}")]
    WitnessMismatch { expected: String, actual: String },

    #[error("degree {index} ({class}) is not ample")]
    NotAmple { index: usize, class: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid complete intersection: {0}")]
    InvalidSpec(String),

    #[error("enumeration budget exceeded: need {needed} points, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
}
