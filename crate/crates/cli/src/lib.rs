//! Configuration, experiment drivers and CSV output for the `catlight`
//! command-line tool.

pub mod config;
pub mod error;
pub mod experiments;
pub mod series;

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

pub use config::{ConfigError, ExperimentKind, ExperimentSpec, LightKind, Mode, ValidationReport};
pub use error::RunError;
pub use experiments::{run, Artifact};
pub use series::ObservableSeries;

/// Reads and resolves a config file; `None` gives the defaults of `kind`.
pub fn load_spec(path: Option<&Path>, kind: ExperimentKind) -> Result<(ExperimentSpec, Vec<String>), ConfigError> {
    let raw = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| ConfigError { errors: vec![format!("{}: {e}", p.display())] })?;
            config::parse_config(&text)?
        }
        None => config::RawConfig::default(),
    };
    raw.resolve(Some(kind))
}

/// Writes each artifact to `<dir>/<name>.csv`, stamped with the resolved
/// configuration.
pub fn write_artifacts(spec: &ExperimentSpec, artifacts: &[Artifact], dir: &Path) -> Result<Vec<PathBuf>, RunError> {
    std::fs::create_dir_all(dir).map_err(|source| RunError::Io { path: dir.to_path_buf(), source })?;
    let stamp = spec.canonical();
    artifacts
        .iter()
        .map(|a| {
            let path = dir.join(format!("{}.csv", a.name));
            let file = File::create(&path).map_err(|source| RunError::Io { path: path.clone(), source })?;
            a.series
                .write_csv(BufWriter::new(file), &stamp)
                .map_err(|source| RunError::Csv { path: path.clone(), source })?;
            Ok(path)
        })
        .collect()
}
