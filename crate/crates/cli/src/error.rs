use std::path::PathBuf;

use catlight::C64;

use crate::config::ConfigError;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("failed at gamma = {gamma}, alpha0 = {alpha}: {source}")]
    Simulation {
        gamma: f64,
        alpha: C64,
        #[source]
        source: catlight::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl RunError {
    /// 2 for configuration problems, 3 for numerical guards, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => 2,
            RunError::Simulation { source, .. } if source.is_numerical_guard() => 3,
            RunError::Simulation { source: catlight::Error::InvalidConfig(_), .. } => 2,
            _ => 1,
        }
    }
}
