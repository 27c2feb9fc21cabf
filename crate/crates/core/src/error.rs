use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid family index d={0}: must satisfy d >= 1")]
    InvalidFamilyIndex(u64),

    #[error("index ({row}, {col}) outside [1, {n}]")]
    IndexOutOfRange { row: usize, col: usize, n: usize },

    #[error("entry {value} at ({row}, {col}) is not in {{-1, 0, 1}}")]
    EntryOutOfRange { row: usize, col: usize, value: String },

    #[error("duplicate entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },

    #[error("dimension {n} exceeds the laplace guard of {max}")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("matrix data has {len} entries, expected {n}x{n}")]
    ShapeMismatch { n: usize, len: usize },

    #[error("modulus {0} is not a supported prime (need 2 <= p < 2^62)")]
    InvalidPrime(u64),

    #[error("structural mismatch: {0}")]
    StructuralMismatch(String),

    #[error("engine disagreement at d={d}: {details}")]
    EngineDisagreement { d: u64, details: String },

    #[error("corrupt checkpoint at line {line}: {reason}")]
    CheckpointCorrupt { line: usize, reason: String },

    #[error("invalid campaign config: {0}")]
    InvalidConfig(String),

    #[error("row {row} outside [1, {n}]")]
    RowOutOfRange { row: usize, n: usize },

    #[error("cannot export: {0}")]
    Export(String),

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
