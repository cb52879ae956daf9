use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {path}: {message}")]
    Config { path: String, message: String },

    #[error("unknown experiment `{name}` (known: {known})")]
    UnknownExperiment { name: String, known: String },

    #[error("seed: {0}")]
    Seed(String),

    #[error("experiment {experiment}: {source}")]
    Experiment {
        experiment: String,
        #[source]
        source: tcsim::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(String),

    #[error("plot: {0}")]
    Plot(String),

    #[error("thread pool: {0}")]
    Threads(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Csv(e.to_string())
    }
}
