//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by constructors, validators, and operations.
///
/// Validation failures carry enough context (state labels, row sums,
/// generator indices) to point at the offending input field.
#[derive(Debug, Error)]
pub enum Error {
    #[error("state space must have at least one state")]
    EmptySpace,

    #[error("duplicate state label: {0}")]
    DuplicateLabel(String),

    #[error("unknown state label: {0}")]
    UnknownLabel(String),

    #[error("cannot parse rational from {text:?}: {reason}")]
    ParseRational { text: String, reason: String },

    #[error("zero denominator in rational {0:?}")]
    ZeroDenominator(String),

    #[error("negative entry {value} at state {label}")]
    NegativeEntry { label: String, value: String },

    #[error("row for state {label} sums to {sum}, expected 1")]
    RowNotStochastic { label: String, sum: String },

    #[error("distribution sums to {sum}, expected 1")]
    DistNotNormalized { sum: String },

    #[error("dimension mismatch: expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("space mismatch in {context}")]
    SpaceMismatch { context: String },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error(
        "partitions not comparable: block {{{block}}} is not contained in a single coarse block"
    )]
    CoarsenessViolated { block: String },

    #[error("kernel is not measure-preserving (generator index {generator})")]
    NotMeasurePreserving { generator: usize },

    #[error("dynamical system needs at least one generator")]
    EmptyGenerators,

    #[error(
        "distribution is not exchangeable: transposition of positions {position} and {next} \
         moves mass between {from} and {to}",
        next = position + 1
    )]
    NotExchangeable {
        position: usize,
        from: String,
        to: String,
    },

    #[error("morphism is not right-invariant: generator {generator} changes the column at state {state}")]
    NotRightInvariant { generator: usize, state: String },

    #[error("morphism is not left-invariant under generator {generator}")]
    NotLeftInvariant { generator: usize },

    #[error("morphism is not almost-surely idempotent")]
    NotIdempotent,

    #[error("starting set has mass {mass}, expected 1")]
    NotFullMeasure { mass: String },

    #[error("morphism is not an ergodic decomposition: {0}")]
    NotErgodicDecomposition(String),

    #[error("product space too large: {size} states exceeds the limit of {limit}")]
    SizeLimit { size: usize, limit: usize },

    #[error("unknown law name: {0}")]
    UnknownLaw(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("internal consistency failure (engine bug): {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
