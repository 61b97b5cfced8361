use std::io;
use std::path::PathBuf;

use kcore::{ConfigError, GraphError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
    #[error("{context}: {source}")]
    Graph {
        context: String,
        #[source]
        source: GraphError,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{failed} of {total} download(s) failed")]
    Fetch { failed: usize, total: usize },
    #[error("{mismatched} node(s) differ from the oracle in {runs} run(s); report: {}", report.display())]
    Mismatch {
        mismatched: usize,
        runs: usize,
        report: PathBuf,
    },
}

impl CliError {
    pub fn io(context: impl Into<String>, source: io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    /// 1 usage, 2 I/O, 3 verification mismatch.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 1,
            CliError::Io { .. }
            | CliError::Graph { .. }
            | CliError::Csv(_)
            | CliError::Fetch { .. } => 2,
            CliError::Mismatch { .. } => 3,
        }
    }
}
