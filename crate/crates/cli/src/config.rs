//! Run configuration: command-line flags override `CMZV_*` variables, which
//! override the config file.
//!
//! The config file is TOML with optional top-level keys:
//!
//! ```toml
//! digits = 60
//! catalog = "my-catalog.json"
//! cache_dir = "/tmp/cmzv"
//! parallel = 4
//! output = "json"
//! ```
//!
//! It is read from `--config` / `CMZV_CONFIG` when given, otherwise from
//! `cmzv.toml` in the working directory if present.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use cmzv_core::PrecisionContext;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const MIN_DIGITS: u32 = 20;
pub const MAX_DIGITS: u32 = 1000;
pub const DEFAULT_DIGITS: u32 = 50;
const DEFAULT_CONFIG: &str = "cmzv.toml";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Pretty,
}

/// Values gathered from flags and the environment; `None` defers to the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub digits: Option<u32>,
    pub catalog: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub parallel: Option<usize>,
    pub output: Option<Format>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    digits: Option<u32>,
    catalog: Option<PathBuf>,
    cache_dir: Option<PathBuf>,
    parallel: Option<usize>,
    output: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub digits: u32,
    /// `None` selects the bundled catalog
    pub catalog_path: Option<PathBuf>,
    pub cache_dir: PathBuf,
    pub parallelism: usize,
    pub output: Format,
}

impl RunConfig {
    pub fn resolve(o: Overrides) -> CliResult<RunConfig> {
        let file = match &o.config {
            Some(p) => read_file(p)?,
            None if Path::new(DEFAULT_CONFIG).is_file() => read_file(Path::new(DEFAULT_CONFIG))?,
            None => FileConfig::default(),
        };
        let cfg = RunConfig {
            digits: o.digits.or(file.digits).unwrap_or(DEFAULT_DIGITS),
            catalog_path: o.catalog.or(file.catalog),
            cache_dir: o
                .cache_dir
                .or(file.cache_dir)
                .unwrap_or_else(default_cache_dir),
            parallelism: o
                .parallel
                .or(file.parallel)
                .unwrap_or_else(default_parallelism),
            output: o.output.or(file.output).unwrap_or_default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        if !(MIN_DIGITS..=MAX_DIGITS).contains(&self.digits) {
            return Err(CliError::Config(format!(
                "digits must lie in [{MIN_DIGITS}, {MAX_DIGITS}], got {}",
                self.digits
            )));
        }
        if self.parallelism == 0 {
            return Err(CliError::Config("parallel must be at least 1".into()));
        }
        Ok(())
    }

    pub fn context(&self) -> PrecisionContext {
        PrecisionContext::with_target(self.digits)
    }
}

fn read_file(path: &Path) -> CliResult<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn default_cache_dir() -> PathBuf {
    if let Some(x) = std::env::var_os("XDG_CACHE_HOME") {
        return PathBuf::from(x).join("cmzv");
    }
    match std::env::var_os("HOME") {
        Some(h) => PathBuf::from(h).join(".cache").join("cmzv"),
        None => PathBuf::from(".cmzv-cache"),
    }
}

fn default_parallelism() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
