use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid JSON at `{path}`: {message}")]
    Json { path: String, message: String },

    #[error("duplicate node id `{id}`")]
    DuplicateNode { id: String },

    #[error("{path}: pair references unknown node `{id}`")]
    UnknownNode { path: String, id: String },

    #[error("{path}: pair must reference two distinct nodes (got `{id}` twice)")]
    SelfPair { path: String, id: String },

    #[error("{path}: duplicate entry for pair ({a}, {b})")]
    DuplicatePair { path: String, a: String, b: String },

    #[error("{path}: score for label `{label}` is not finite")]
    NonFiniteScore { path: String, label: String },

    #[error("conflicting labels for pair ({a}, {b}): `{first}` vs `{second}` after orientation")]
    SymmetryConflict {
        a: String,
        b: String,
        first: String,
        second: String,
    },

    #[error("unknown relation label `{0}`")]
    UnknownLabel(String),

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("epoch count must be positive")]
    ZeroEpochs,

    #[error("example {index} has gold label `{label}` outside the model's label set")]
    LabelOutsideSet { index: usize, label: String },

    #[error("model is infeasible: {detail}")]
    Infeasible { detail: String },

    #[error("instance too large for exhaustive search: {pairs} pairs (limit {limit})")]
    TooLarge { pairs: usize, limit: usize },

    #[error("causal pair ({a}, {b}) has no temporal score or pinned label, required by the causal-precedence constraint")]
    MissingTemporalForCausal { a: String, b: String },

    #[error("gold-enforcement pair ({a}, {b}) has no gold {kind} label in the document")]
    MissingGoldPair { a: String, b: String, kind: String },

    #[error("document has no gold annotations, required by this operation")]
    MissingGold,

    #[error("closure conflict: pair ({a}, {b}) has label `{existing}` but `{derived}` is forced via {via}")]
    ClosureConflict {
        a: String,
        b: String,
        existing: String,
        derived: String,
        via: String,
    },

    #[error("no gold causal pairs to evaluate against")]
    NoGoldCausalPairs,

    #[error("prediction lists have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("degenerate synthetic size: need at least 2 nodes, got {nodes}")]
    DegenerateSynthSize { nodes: usize },

    #[error("{0}")]
    InvalidConfig(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
