use std::path::PathBuf;

use thiserror::Error;
use utem_core::{EngineError, ParseError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse {
        path: PathBuf,
        source: ParseError,
    },
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Evaluation(#[from] EngineError),
}
