//! Crate-wide error type.

use thiserror::Error;

use crate::dyadic::DyadicIndex;

/// Everything that can go wrong across the crate, from domain violations to
/// malformed input files.
#[derive(Debug, Error)]
pub enum Error {
    #[error("position {position} is out of range for level {level} (need position < 2^level)")]
    PositionOutOfRange { level: u32, position: u64 },

    #[error("level {level} exceeds the supported maximum {max}")]
    LevelTooDeep { level: u32, max: u32 },

    #[error("the root interval has no parent")]
    RootHasNoParent,

    #[error("intervals {a} and {b} are nested, so the collection is not an antichain")]
    NotAnAntichain { a: DyadicIndex, b: DyadicIndex },

    #[error("depth {depth} exceeds the exhaustive-enumeration limit {limit}")]
    DepthLimitExceeded { depth: u32, limit: u32 },

    #[error("exponent must lie in [1, ∞], got {0}")]
    InvalidExponent(f64),

    #[error("cannot parse {0:?} as an exponent (expected a number ≥ 1 or \"inf\")")]
    ExponentParse(String),

    #[error("this operation requires a finite exponent strictly between 1 and ∞, got {0}")]
    ExponentNotInOpenRange(String),

    #[error("a step function of depth {depth} needs {expected} cell values, got {got}")]
    StepLength { depth: u32, expected: usize, got: usize },

    #[error("interval at level {level} is finer than the step-function resolution {depth}")]
    LevelBeyondDepth { level: u32, depth: u32 },

    #[error("coefficient at level {level} cannot be represented at output depth {depth}")]
    CoefficientTooDeep { level: u32, depth: u32 },

    #[error("atom weight must be positive and finite, got {0}")]
    InvalidWeight(f64),

    #[error("sign value {0} is not ±1")]
    InvalidSign(i64),

    #[error("interval {interval} does not contain the atom's base point {point}")]
    SignOffChain { interval: DyadicIndex, point: String },

    #[error("dyadic point {0:?} is not of the form k/2^j with 0 ≤ k < 2^j")]
    InvalidPoint(String),

    #[error("family of {count} balls exceeds the exact-search limit {limit}")]
    FamilyTooLarge { count: usize, limit: usize },

    #[error("dimension {0} is unsupported (expected 1, 2, or 3)")]
    UnsupportedDimension(usize),

    #[error("ball radius must be positive and finite, got {0}")]
    InvalidRadius(f64),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("invalid input: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
