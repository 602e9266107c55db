use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian: ||A - A†||_F = {residual:e} exceeds {tol:e}")]
    Hermiticity { residual: f64, tol: f64 },

    #[error("matrix is singular: smallest singular value {sigma_min:e}")]
    Singular { sigma_min: f64 },

    #[error("matrix is not unitary: ||U†U - I||_F = {residual:e}")]
    Unitarity { residual: f64 },

    #[error("parameter {name} = {value} outside admissible interval {interval}")]
    Parameter {
        name: &'static str,
        value: f64,
        interval: String,
    },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("decomposition did not converge: {0}")]
    Convergence(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("state is not physical: {0}")]
    Physicality(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("usage error: {0}")]
    Usage(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Physicality(_) => 2,
            Error::Io { .. } => 3,
            _ => 1,
        }
    }
}
