use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}: {source}")]
    Wav {
        path: PathBuf,
        #[source]
        source: hound::Error,
    },

    #[error("{path}: unsupported WAV encoding ({detail})")]
    UnsupportedCodec { path: PathBuf, detail: String },

    #[error("{0}: audio contains no samples")]
    EmptyAudio(PathBuf),

    #[error("invalid audio buffer: {0}")]
    InvalidBuffer(String),

    #[error("expected {expected} channel(s), got {actual}")]
    ChannelCount { expected: usize, actual: usize },

    #[error("sample-rate mismatch: expected {expected} Hz, got {actual} Hz")]
    SampleRateMismatch { expected: u32, actual: u32 },

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("HRIR database {dir}: missing azimuth {azimuth} deg")]
    MissingAngle { dir: PathBuf, azimuth: i32 },

    #[error("missing stem `{stem}` in {dir}")]
    MissingStem { stem: String, dir: PathBuf },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{0}")]
    Format(String),

    #[error("no rows")]
    NoRows,
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
