use std::path::PathBuf;

use thiserror::Error;

use crate::subset::VariableSubset;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty file")]
    EmptyFile,
    #[error("ragged rows: row {row} has {found} fields, expected {expected}")]
    RaggedRows { row: usize, expected: usize, found: usize },
    #[error("row {row}, column {column}: {value:?} is not a non-negative integer code")]
    NonIntegerCell { row: usize, column: usize, value: String },
    #[error("row {row}, column {column}: missing value")]
    MissingValue { row: usize, column: usize },
    #[error("duplicate column name {0:?}")]
    DuplicateColumn(String),
    #[error("variable {name:?}: code {code} out of range for cardinality {cardinality}")]
    CodeOutOfRange { name: String, code: u32, cardinality: u32 },
    #[error("variable {name:?}: declared cardinality {declared} is smaller than observed {observed}")]
    CardinalityTooSmall { name: String, declared: u32, observed: u32 },
    #[error("columns have unequal lengths")]
    UnequalColumns,
    #[error("empty subset")]
    EmptySubset,
    #[error("variable index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },
    #[error("entropy cache has no entry for subset {0}")]
    MissingEntry(VariableSubset),
    #[error("no interaction value for subset {0}")]
    MissingInteraction(VariableSubset),
    #[error("target variable {target} is not a member of {subset}")]
    TargetNotInSubset { target: usize, subset: VariableSubset },
    #[error("subset {subset} has {size} members, need at least {min}")]
    SubsetTooSmall {
        subset: VariableSubset,
        size: usize,
        min: usize,
    },
    #[error("cache fingerprint {found} does not match dataset {expected}")]
    FingerprintMismatch { expected: String, found: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn out_of_range(what: &'static str, detail: impl Into<String>) -> Self {
        Error::OutOfRange {
            what,
            detail: detail.into(),
        }
    }

    /// True for errors caused by the input data rather than by the caller.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::EmptyFile
                | Error::RaggedRows { .. }
                | Error::NonIntegerCell { .. }
                | Error::MissingValue { .. }
                | Error::DuplicateColumn(_)
                | Error::CodeOutOfRange { .. }
                | Error::CardinalityTooSmall { .. }
                | Error::UnequalColumns
                | Error::Csv(_)
                | Error::Io { .. }
                | Error::FingerprintMismatch { .. }
        )
    }

    /// True for invalid parameters, such as a subset size larger than the
    /// number of variables.
    pub fn is_usage_error(&self) -> bool {
        matches!(
            self,
            Error::EmptySubset
                | Error::IndexOutOfRange { .. }
                | Error::UnknownVariable(_)
                | Error::OutOfRange { .. }
                | Error::TargetNotInSubset { .. }
                | Error::SubsetTooSmall { .. }
        )
    }
}
