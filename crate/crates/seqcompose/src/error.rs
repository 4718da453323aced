//! Crate-wide error type.
//!
//! Variants map one-to-one onto the CLI's error classes so the binary can
//! print a stable `error[<class>]:` prefix for every failure mode.

use std::path::PathBuf;

use thiserror::Error;

/// Anything that can go wrong while parsing, generating, mining or scoring.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed log input: bad header, wrong field count, unparseable cell.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Invalid or contradictory configuration values.
    #[error("{0}")]
    Config(String),

    /// A miner was invoked with parameters it cannot honour, or a mining
    /// stage produced nothing to continue with.
    #[error("{0}")]
    Mining(String),

    /// Evaluation inputs are unusable (level mismatch, zero denominators).
    #[error("{0}")]
    Eval(String),

    /// A pipeline stage failed; wraps the underlying error with the stage name.
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    /// Filesystem failure, annotated with the offending path.
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// JSON (de)serialization failure, annotated with the offending path.
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable error class used by the CLI as the `error[<class>]:` prefix.
    pub fn class(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Config(_) => "config",
            Error::Mining(_) => "mine",
            Error::Eval(_) => "eval",
            Error::Stage { source, .. } => source.class(),
            Error::Io { .. } | Error::Json { .. } => "io",
        }
    }

    /// Annotates a pipeline-stage failure with the stage that raised it.
    pub fn at_stage(stage: &'static str) -> impl FnOnce(Error) -> Error {
        move |source| Error::Stage {
            stage,
            source: Box::new(source),
        }
    }

    /// Wraps an I/O failure with the path it happened on.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Wraps a JSON (de)serialization failure with the file it came from.
    pub fn json(path: impl Into<PathBuf>, source: serde_json::Error) -> Self {
        Error::Json {
            path: path.into(),
            source,
        }
    }
}
