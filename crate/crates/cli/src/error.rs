use std::path::PathBuf;

use syncjpeg::DecodeError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{kind}: {source}", kind = .source.kind())]
    Decode {
        #[from]
        source: DecodeError,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("no decodable JPEG files in {0}")]
    EmptyCorpus(PathBuf),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Decode { source } => source.exit_code() as u8,
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::EmptyCorpus(_) => 4,
        }
    }
}
