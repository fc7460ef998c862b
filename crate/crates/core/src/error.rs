//! Error type shared by all modules. Display strings start with a stable
//! kebab-case code so CLI consumers can match on them.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("empty-configuration")]
    EmptyConfiguration,

    #[error("degenerate-configuration: {0}")]
    DegenerateConfiguration(String),

    #[error("invalid-cardinality: expected {expected} points, got {got}")]
    InvalidCardinality { expected: usize, got: usize },

    #[error("invalid-order: k must be at least 1")]
    InvalidOrder,

    #[error("dimension-mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty-input")]
    EmptyInput,

    #[error("not-odd: {0}")]
    NotOdd(String),

    #[error("grid-too-coarse: need at least {min} samples, got {got}")]
    GridTooCoarse { min: usize, got: usize },

    #[error("zero-vector")]
    ZeroVector,

    #[error("invalid-weights: {0}")]
    InvalidWeights(String),

    #[error("diameter-exceeds-scale: support diameter {diameter} exceeds scale {scale}")]
    DiameterExceedsScale { diameter: f64, scale: f64 },

    #[error("invalid-scale: {0}")]
    InvalidScale(String),

    #[error("invalid-boundary-point: {0}")]
    InvalidBoundaryPoint(String),

    #[error("homotopy-not-well-defined: {0}")]
    HomotopyNotWellDefined(String),

    #[error("degenerate-roots: {0}")]
    DegenerateRoots(String),

    #[error("equal-points")]
    EqualPoints,

    #[error("lp-failure: {0}")]
    LpFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
