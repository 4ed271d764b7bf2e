use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the induction and cleaning pipeline.
///
/// Variants are grouped by the stage that produces them so the CLI can
/// categorize failures without string matching.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("empty corpus: {0} contains no segment pairs")]
    EmptyCorpus(PathBuf),

    #[error("candidate pair limit of {limit} exceeded")]
    TooManyPairs { limit: usize },

    #[error("inconsistent contingency table: {0}")]
    Contingency(String),

    #[error("binomial domain error: k={k} exceeds n={n}")]
    BinomialDomain { k: u64, n: u64 },

    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("cleaning iteration {iteration}: {message}")]
    Pipeline { iteration: usize, message: String },

    #[error("lexicon not regraded: {0}")]
    NotRegraded(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown {side} word `{word}`")]
    UnknownWord { side: &'static str, word: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    /// Short name of the pipeline stage the error belongs to.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Parse { .. } | Error::EmptyCorpus(_) => "corpus",
            Error::TooManyPairs { .. } | Error::Contingency(_) => "assoc",
            Error::BinomialDomain { .. } | Error::Estimation(_) => "mixture",
            Error::Pipeline { .. } | Error::NotRegraded(_) => "pipeline",
            Error::Config(_) => "config",
            Error::UnknownWord { .. } => "lexicon",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
