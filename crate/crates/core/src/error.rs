//! Error type shared across the crate.

use std::path::PathBuf;
use thiserror::Error;

/// Errors produced by any stage of the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unsupported WAV encoding in {path}: {detail}")]
    UnsupportedWav { path: PathBuf, detail: String },

    #[error("invalid audio: {0}")]
    InvalidAudio(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("clip too short: {needed} samples needed, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("sample rate mismatch: expected {expected} Hz, got {got} Hz")]
    SampleRateMismatch { expected: u32, got: u32 },

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("model error: {0}")]
    Model(String),

    #[error("model file {path}: {detail}")]
    ModelFile { path: PathBuf, detail: String },

    #[error("training diverged: {0}")]
    Diverged(String),

    #[error("unknown topic '{0}'")]
    UnknownTopic(String),

    #[error("topic '{0}' is closed")]
    TopicClosed(String),

    #[error("pipeline node '{node}' failed: {source}")]
    PipelineNode {
        node: String,
        #[source]
        source: Box<Error>,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
