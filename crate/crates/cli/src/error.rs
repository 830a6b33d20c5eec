use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flag, config file or parameter value; exit code 2.
    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },
    /// The computation itself reported a failure or a negative verdict;
    /// exit code 1.
    #[error("{0}")]
    Domain(#[from] kneadlab_core::Error),
    #[error("{0}")]
    Verdict(String),
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(location: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            location: location.into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Output { .. } => 2,
            CliError::Domain(_) | CliError::Verdict(_) => 1,
        }
    }
}
