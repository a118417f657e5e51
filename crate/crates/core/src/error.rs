use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, HolError>;

#[derive(Debug, Error)]
pub enum HolError {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("row {row}: {message}")]
    MalformedRow { row: usize, message: String },

    #[error("lo > hi at row {row} (lo = {lo}, hi = {hi})")]
    LabelOrder { row: usize, lo: u32, hi: u32 },

    #[error("label [{lo}, {hi}] at row {row} is outside [1, {n_classes}]")]
    LabelRange {
        row: usize,
        lo: u32,
        hi: u32,
        n_classes: u32,
    },

    #[error("invalid value for {name}: {message}")]
    InvalidParameter { name: String, message: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("empty dataset: {0}")]
    EmptyDataset(String),

    #[error("overlapping binning ranges: {0}")]
    OverlappingRanges(String),

    #[error("row {row}: ranking functions are not non-decreasing")]
    NonMonotone { row: usize },

    #[error("no trainable dual variable: every sample spans all classes")]
    NoTrainableVariables,

    #[error("dense oracle limited to {limit} variables, problem has {actual}")]
    OracleTooLarge { limit: usize, actual: usize },

    #[error("need at least {folds} groups for {folds} folds, found {groups}")]
    TooFewGroups { groups: usize, folds: usize },

    #[error("manifest error: {0}")]
    Manifest(String),

    #[error("model file error: {0}")]
    ModelFormat(String),

    #[error("dataset file not found: {0}")]
    MissingData(PathBuf),
}

impl HolError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HolError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn param(name: &str, message: impl Into<String>) -> Self {
        HolError::InvalidParameter {
            name: name.to_string(),
            message: message.into(),
        }
    }
}
