use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A configuration value violates its documented constraint.
    #[error("invalid `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("no {degree}-regular graph on {agents} nodes (need degree <= agents-1 and degree*agents even)")]
    InfeasibleDegree { agents: usize, degree: usize },

    #[error("invalid interval [{a}, {b}]: upper end below lower end")]
    InvalidInterval { a: f64, b: f64 },

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("threshold undefined for an arm with zero gap")]
    UndefinedThreshold,

    #[error("missing file {}", .0.display())]
    MissingFile(PathBuf),

    #[error("failed to parse {}: {reason}", path.display())]
    Parse { path: PathBuf, reason: String },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
