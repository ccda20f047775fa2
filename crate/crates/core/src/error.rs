use std::path::PathBuf;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("document source has {lines} lines but metadata has {rows} rows")]
    CountMismatch { lines: usize, rows: usize },

    #[error("document {doc_id} is empty")]
    EmptyDocument { doc_id: usize },

    #[error("unknown tag {tag:?} in {field}")]
    UnknownTag { field: &'static str, tag: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("id sets differ: {0}")]
    IdSetMismatch(String),

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("training data contains a single class")]
    SingleClass,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("missing ids: {0}")]
    MissingIds(String),

    #[error("test labels requested outside final scoring (document {0})")]
    TestLabelAccess(usize),

    #[error("config error: {0}")]
    Config(String),

    #[error("missing dependency: {0}")]
    MissingDependency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
