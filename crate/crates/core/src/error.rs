use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no {regularity}-regular graph on {n} vertices (need n > regularity and n*regularity even)")]
    Parity { n: usize, regularity: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("gave up generating a simple connected regular graph after {attempts} pairings")]
    GenerationFailed { attempts: usize },

    #[error("{n} qubits exceeds the statevector limit of {limit}")]
    Capacity { n: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("schedule has {gammas} gammas but {betas} betas")]
    LengthMismatch { gammas: usize, betas: usize },

    #[error("fourier point is empty")]
    EmptyPoint,

    #[error("invalid bias field: {0}")]
    InvalidBias(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("target accuracy {r_star} is never reached")]
    Unreachable { r_star: f64 },

    #[error("inconsistent ensemble: {0}")]
    InconsistentEnsemble(String),

    #[error("all {restarts} restarts failed at level {level}: {last}")]
    LevelFailed { level: usize, restarts: usize, last: String },

    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
