use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid manifest {path}: {reason}")]
    Manifest { path: PathBuf, reason: String },

    #[error("corpus `{corpus_id}` contains no tokens after normalization")]
    EmptyCorpus { corpus_id: String },

    #[error("corpus `{corpus_id}` has {word_count} words but a sample needs {sample_size}")]
    CorpusTooSmall {
        corpus_id: String,
        word_count: usize,
        sample_size: usize,
    },

    #[error(
        "could only form {formed} of {requested} unique pairs for {corpus_a}-{corpus_b} after {draws} draws"
    )]
    PairingExhausted {
        corpus_a: String,
        corpus_b: String,
        requested: usize,
        formed: usize,
        draws: usize,
    },

    #[error("frequency vectors belong to different feature spaces")]
    SpaceMismatch,

    #[error("frequency vector has zero rank variance (all counts equal)")]
    DegenerateVector,

    #[error("benchmark standard deviation {std} is not above {epsilon}")]
    DegenerateBenchmark { std: f64, epsilon: f64 },

    #[error("fold construction needs at least {needed} samples per corpus: {details}")]
    FoldConstruction { needed: usize, details: String },

    #[error("unknown feature type `{0}` (expected one of W1, W2, C2, C3, C4)")]
    UnknownFeatureType(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{0}")]
    MissingCorpus(String),

    #[error("malformed input {path}: {reason}")]
    Parse { path: PathBuf, reason: String },

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
