use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dims(String),
    #[error("state is not normalized (|norm² - 1| = {0:e})")]
    Norm(f64),
    #[error("invalid subsystem permutation: {0}")]
    Perm(String),
    #[error("parameter out of range: {0}")]
    Param(String),
    #[error("invalid orthonormal basis: {0}")]
    Basis(String),
    #[error("matrix is not unitary (max deviation {0:e})")]
    Unitary(f64),
    #[error("unknown special basis `{0}` (expected product, bell or case_iii)")]
    Name(String),
    #[error("invalid grid specification: {0}")]
    Spec(String),
    #[error("I/O failure on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed CSV input: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
