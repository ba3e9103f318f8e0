use serde::Deserialize;
use std::path::{Path, PathBuf};

/// Settings read from an optional TOML file of plain `key = value` pairs.
/// Command-line flags take precedence.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub cache_dir: Option<PathBuf>,
    pub tol: Option<f64>,
    pub terms: Option<u64>,
    pub threads: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// Effective settings after merging flags over the file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    pub cache_dir: Option<PathBuf>,
    pub tol: Option<f64>,
    pub terms: Option<u64>,
    pub threads: Option<usize>,
}

impl Settings {
    pub fn merge(file: FileConfig, flags: FileConfig) -> Self {
        Settings {
            cache_dir: flags.cache_dir.or(file.cache_dir),
            tol: flags.tol.or(file.tol),
            terms: flags.terms.or(file.terms),
            threads: flags.threads.or(file.threads),
        }
    }
}
