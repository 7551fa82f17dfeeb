use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Failures reading IDX containers.
#[derive(Debug, Error)]
pub enum IdxError {
    #[error("{path}: bad magic 0x{found:08x} (expected 0x{expected:08x})")]
    BadMagic { path: PathBuf, found: u32, expected: u32 },
    #[error("{path}: truncated payload: header declares {expected} bytes, found {found}")]
    Truncated {
        path: PathBuf,
        expected: usize,
        found: usize,
    },
    #[error("{path}: dimension mismatch: {detail}")]
    DimensionMismatch { path: PathBuf, detail: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Idx(#[from] IdxError),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("class {0} is absent from the source dataset")]
    MissingClass(String),
    #[error("label {label} out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },
    #[error("invalid state file: {0}")]
    BadState(String),
    #[error("state file version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("invalid profile: {0}")]
    Profile(String),
    #[error("task {task}: {source}")]
    Task {
        task: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
