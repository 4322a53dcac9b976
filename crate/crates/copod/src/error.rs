use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("model document: unsupported format_version {found} (expected {expected})")]
    VersionMismatch { found: u64, expected: u32 },
    #[error("model document is corrupted: {0}")]
    CorruptModel(String),
    #[error("{context}: {source}")]
    Data {
        context: String,
        #[source]
        source: copod_core::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn data(context: impl Into<String>, source: copod_core::Error) -> Self {
        Error::Data {
            context: context.into(),
            source,
        }
    }

    /// Process exit code for the CLI: 2 for unreadable or malformed
    /// input, 3 for degenerate data, 4 for dimension mismatches, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use copod_core::Error as E;
        match self {
            Error::Parse { .. } | Error::VersionMismatch { .. } | Error::CorruptModel(_) => 2,
            Error::Data { source, .. } => match source {
                E::TooFewObservations { .. } | E::Empty | E::EmptyPartition { .. } => 3,
                E::DimensionMismatch { .. } => 4,
                E::NonFinite { .. } | E::RaggedRow { .. } | E::InvalidLabel { .. } | E::MissingLabels => 2,
                _ => 1,
            },
            Error::Io { .. } => 2,
            Error::Usage(_) => 1,
        }
    }
}
