use thiserror::Error;

/// Errors produced by dataset loading, sampling, and the enumeration oracle.
#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to parse {path}: {reason}")]
    UnparseableFile { path: String, reason: String },

    #[error("label column {0:?} not found")]
    LabelColumnNotFound(String),

    #[error("every row was dropped while cleaning the table")]
    AllRowsDropped,

    #[error("label column contains a single class; at least two are required")]
    SingleClassLabels,

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("cannot split {n} rows into {k} folds")]
    FoldCountExceedsRows { n: usize, k: usize },

    #[error("fold count must be at least 2, got {0}")]
    FoldCountTooSmall(usize),

    #[error("ensemble prediction requires at least one tree")]
    EmptyEnsemble,

    #[error("move {0:?} is not valid for this tree")]
    InvalidMove(crate::moves::MoveKind),

    #[error("enumeration space too large: {reason}")]
    EnumerationSpaceTooLarge { reason: String },

    #[error("distribution key {0:?} is missing from the reference distribution")]
    DistributionKeyMismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
