use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("truncation level must be at least 1, got {0}")]
    InvalidLevel(usize),

    #[error("truncation levels differ: {left} vs {right}")]
    LevelMismatch { left: usize, right: usize },

    #[error("path needs at least 2 points, got {0}")]
    DegeneratePath(usize),

    #[error("series is not group-like: constant term {0}")]
    NotGroupLike(f64),

    #[error("series is not a Lie element (residual {0:e})")]
    NotLieElement(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("codebook fingerprint mismatch: {0}")]
    FingerprintMismatch(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{0}")]
    InsufficientData(String),

    #[error("malformed {kind} file: {reason}")]
    Format { kind: &'static str, reason: String },

    #[error("manifest error: {0}")]
    Manifest(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("image error on {path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
