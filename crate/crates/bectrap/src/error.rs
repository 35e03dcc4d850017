//! Error type shared across the crate, with process exit codes for the CLI.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("config error: {0}")]
    Config(String),

    #[error("{path}:{line}: {msg}")]
    ConfigLine {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("grid too small: wavepacket at x_c = {x_c} needs half-width L > {required}, got {got}")]
    GridTooSmall { x_c: f64, required: f64, got: f64 },

    #[error("numerical failure: {0}")]
    Numerics(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("sweep finished with {failed} failed cell(s); see ledger")]
    PartialSweep { failed: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code: 1 usage/config, 2 numerical failure, 3 partial sweep failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::ConfigLine { .. } | Error::GridTooSmall { .. } | Error::Io { .. } => 1,
            Error::Numerics(_) => 2,
            Error::PartialSweep { .. } => 3,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
        let path = path.into();
        move |source| Error::Io { path, source }
    }
}
