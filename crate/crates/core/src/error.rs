use std::path::PathBuf;

use thiserror::Error;

use crate::types::ClassLabel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// One failed dataset invariant. Sample indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DimensionMismatch {
        sample: usize,
        expected: usize,
        found: usize,
    },
    NonFiniteValue {
        sample: usize,
        index: usize,
    },
    EmptyClass {
        class: ClassLabel,
        count: usize,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::DimensionMismatch {
                sample,
                expected,
                found,
            } => {
                write!(f, "sample {sample}: length {found}, expected {expected}")
            }
            Violation::NonFiniteValue { sample, index } => {
                write!(f, "sample {sample}: non-finite value at position {index}")
            }
            Violation::EmptyClass { class, .. } => {
                write!(f, "class {class} has no samples")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value at position {index}")]
    NonFiniteValue { index: usize },

    #[error("signal must contain at least {min} value(s), got {len}")]
    SignalTooShort { min: usize, len: usize },

    #[error("class {class} has {count} training sample(s)")]
    EmptyClass { class: ClassLabel, count: usize },

    #[error("invalid dataset: {}", summarize(.0))]
    InvalidDataset(Vec<Violation>),

    #[error("sieve size m = {m} outside [0, {n_total}]")]
    MOutOfRange { m: usize, n_total: usize },

    #[error("pipeline expects feature dimension {expected}, dataset has {found}")]
    ConfigDimensionMismatch { expected: usize, found: usize },

    #[error("dataset feature dimension {found} is smaller than the requested {target}")]
    DatasetTooSmall { found: usize, target: usize },

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse { row: usize, column: usize, message: String },

    #[error("row {row}: label {label} is not 1 or 2")]
    LabelOutOfRange { row: usize, label: String },

    #[error("sidecar mismatch: {0}")]
    SidecarMismatch(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
}

fn summarize(violations: &[Violation]) -> String {
    let shown: Vec<String> = violations.iter().take(5).map(|v| v.to_string()).collect();
    let mut out = shown.join("; ");
    if violations.len() > 5 {
        out.push_str(&format!("; ... ({} total)", violations.len()));
    }
    out
}
