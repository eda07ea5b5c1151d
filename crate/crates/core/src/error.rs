use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("step {step}: invalid state in cell {cell}: {reason}")]
    InvalidStep { step: usize, cell: usize, reason: String },

    #[error("linear solve did not converge: relative residual {residual:.3e} after {iterations} iterations")]
    NotConverged { residual: f64, iterations: usize },

    #[error("singular block at wavenumber {wavenumber:?} (condition estimate {condition:.3e})")]
    SingularBlock { wavenumber: [i64; 2], condition: f64 },

    #[error("{0}")]
    Unsupported(String),

    #[error("ladder needs ≥ {needed} points, got {found}")]
    LadderTooShort { needed: usize, found: usize },

    #[error("ladder must be strictly decreasing")]
    LadderNotDecreasing,

    #[error("cannot fit a log-log slope for `{quantity}`: {reason}")]
    DegenerateFit { quantity: String, reason: String },

    #[error("stream function mode k={mode} is not resolved on a grid with N={cells}")]
    UnresolvedMode { mode: i64, cells: usize },

    #[error("{path}: line {line}: {message}")]
    Parse { path: PathBuf, line: u64, message: String },

    #[error("cannot access {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
