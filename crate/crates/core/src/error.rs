use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("hypernym cycle through synset `{0}`")]
    Cycle(String),

    #[error("unknown synset `{0}`")]
    UnknownSynset(String),

    #[error("part-of-speech mismatch between `{0}` and `{1}`")]
    PosMismatch(String, String),

    #[error("out of vocabulary: `{0}`")]
    OutOfVocabulary(String),

    #[error("metric {0} needs an information-content table")]
    MissingIc(&'static str),

    #[error("counts are empty or sum to zero")]
    EmptyCounts,

    #[error("corpus contains no documents")]
    EmptyCorpus,

    #[error("vocabulary is empty after applying min_count")]
    EmptyVocabulary,

    #[error("rank {k} exceeds min(rows, columns) = {max}")]
    RankTooLarge { k: usize, max: usize },

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("training diverged: {0}")]
    Divergence(String),

    #[error("zero vector for `{0}`")]
    ZeroVector(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("target has zero variance")]
    ZeroVariance,

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("need at least {needed} rows, have {available}")]
    InsufficientRows { needed: usize, available: usize },

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("resource not available: {0}")]
    MissingResource(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(path: impl AsRef<std::path::Path>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.as_ref().display().to_string(),
            line,
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this error: 1 usage, 2 data or parse, 3 numeric.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) => 1,
            Error::Convergence(_)
            | Error::Divergence(_)
            | Error::ZeroVariance
            | Error::ZeroVector(_)
            | Error::NonFinite(_) => 3,
            _ => 2,
        }
    }
}
