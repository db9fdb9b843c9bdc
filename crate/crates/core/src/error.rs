use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

/// One offending line of an input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

impl LineError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for LineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("missing input file {}", .0.display())]
    MissingInput(PathBuf),

    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unknown tuple format tag `{0}` (expected hyperlex-tsv, category-norm-csv or native-jsonl)")]
    UnknownFormat(String),

    #[error("{source_name}: no tuples parsed")]
    NoTuples { source_name: String },

    #[error("{source_name}: {} schema violation(s); first: {}", errors.len(), errors.first().map(|e| e.to_string()).unwrap_or_default())]
    Schema {
        source_name: String,
        errors: Vec<LineError>,
    },

    #[error("template `{id}`: {reason}")]
    Template { id: String, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("every response subset was rejected by the bogus-probe control")]
    AllSubsetsRejected,

    #[error("probe sets differ between `{left}` and `{right}`; paired comparison impossible")]
    ProbeSetMismatch { left: String, right: String },

    #[error("probe `{probe}` needs a `{variant}` response row")]
    MissingVariant { probe: String, variant: String },

    #[error("no agents of kind {0} in the roster")]
    MissingAgentKind(String),

    #[error("config: {0}")]
    Config(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        let path = path.into();
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::MissingInput(path)
        } else {
            Error::Io { path, source }
        }
    }

    pub fn schema(source_name: impl Into<String>, errors: Vec<LineError>) -> Self {
        Error::Schema {
            source_name: source_name.into(),
            errors,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
