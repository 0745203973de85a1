use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: invalid UTF-8 byte sequence")]
    InvalidUtf8 { line: usize },

    #[error("{path}:{line}: {message}")]
    Format {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("word not in vocabulary: {0:?}")]
    WordNotFound(String),

    #[error("word id {id} out of range (vocabulary size {size})")]
    IdOutOfRange { id: usize, size: usize },

    #[error("vocabulary has {size} entries; at least {required} required")]
    VocabTooSmall { size: usize, required: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("empty effective corpus: no in-vocabulary tokens to train on")]
    EmptyCorpus,

    #[error("no usable pairs: every dictionary entry had a missing vocabulary side")]
    NoUsablePairs,

    #[error("training diverged at epoch {epoch} (residual not finite); retry with a lower learning rate")]
    Diverged { epoch: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("dictionary too small: need {required} entries, have {available}")]
    DictionaryTooSmall { required: usize, available: usize },

    #[error("empty evaluable set: no test entry had both sides in vocabulary")]
    EmptyEvalSet,

    #[error("selected vectors have rank {rank}; at least 2 required for projection")]
    RankDeficient { rank: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
