use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::DEFAULT_MAX_ORDER;
use crate::lattice::DEFAULT_MAX_SUBGROUPS;
use crate::transfer::DEFAULT_BUDGET;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
    Dot,
}

/// Resolved settings for one invocation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub max_order: usize,
    pub max_subgroups: usize,
    /// Most transfer systems any enumeration may visit.
    pub budget: u64,
    /// Directory holding JSONL caches; no caching when absent.
    pub cache_dir: Option<PathBuf>,
    pub format: OutputFormat,
    /// Worker threads for certificate computation; 0 picks the core count.
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_order: DEFAULT_MAX_ORDER,
            max_subgroups: DEFAULT_MAX_SUBGROUPS,
            budget: DEFAULT_BUDGET,
            cache_dir: None,
            format: OutputFormat::Text,
            workers: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("max-order", self.max_order as u64),
            ("max-subgroups", self.max_subgroups as u64),
            ("budget", self.budget),
        ] {
            if value == 0 {
                return Err(Error::Domain(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

/// Settings read from a TOML file. Every key is optional; unknown keys are
/// rejected.
#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub max_order: Option<usize>,
    pub max_subgroups: Option<usize>,
    pub budget: Option<u64>,
    pub cache_dir: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub workers: Option<usize>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse {
            position: e.span().map_or(0, |s| s.start),
            message: e.message().to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Domain(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// Flags shared by every subcommand. Flags win over `TSK_*` variables,
/// which win over the config file, which wins over built-in defaults.
#[derive(Args, Clone, Debug, Default)]
pub struct GlobalArgs {
    /// Largest group order to build a multiplication table for.
    #[arg(long, global = true, env = "TSK_MAX_ORDER")]
    pub max_order: Option<usize>,

    /// Largest number of subgroups to enumerate.
    #[arg(long, global = true)]
    pub max_subgroups: Option<usize>,

    /// Most transfer systems an enumeration may visit.
    #[arg(long, global = true, env = "TSK_BUDGET")]
    pub budget: Option<u64>,

    /// Directory for the JSONL transfer-system cache.
    #[arg(long, global = true, env = "TSK_CACHE_DIR")]
    pub cache: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    /// Shorthand for `--format json`.
    #[arg(long, global = true, conflicts_with = "format")]
    pub json: bool,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// TOML file with defaults for the settings above.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

impl GlobalArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let d = RunConfig::default();
        let format = if self.json { Some(OutputFormat::Json) } else { self.format };
        let config = RunConfig {
            max_order: self.max_order.or(file.max_order).unwrap_or(d.max_order),
            max_subgroups: self.max_subgroups.or(file.max_subgroups).unwrap_or(d.max_subgroups),
            budget: self.budget.or(file.budget).unwrap_or(d.budget),
            cache_dir: self.cache.clone().or(file.cache_dir),
            format: format.or(file.format).unwrap_or(d.format),
            workers: self.workers.or(file.workers).unwrap_or(d.workers),
        };
        config.validate()?;
        Ok(config)
    }
}
