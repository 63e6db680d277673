//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("measure is not a Blaschke measure: {0}")]
    BadMeasure(String),

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("solver did not converge: {0}")]
    NoConvergence(String),

    #[error("homotopy step failed: {0}")]
    HomotopyFailure(String),

    #[error("extraction inconsistent: {0}")]
    Extraction(String),

    #[error("not a self-map of the disk: {0}")]
    NotSelfMap(String),

    #[error("grids differ: {0}")]
    GridMismatch(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
