//! Run configuration: defaults, the optional config file named by the
//! `EXTREMAP_CONFIG` environment variable, and flag overrides on top.

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// Environment variable naming a JSON config file with the same fields as
/// the global flags; explicit flags win over the file.
pub const CONFIG_ENV_VAR: &str = "EXTREMAP_CONFIG";

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub tol: f64,
    pub restarts: usize,
    pub samples: usize,
    pub seed: u64,
    /// Where the report goes; not part of the report itself, so runs that
    /// differ only in destination stay byte-identical.
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            restarts: 64,
            samples: 200,
            seed: 0,
            output: None,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
struct ConfigFile {
    tol: Option<f64>,
    restarts: Option<usize>,
    samples: Option<usize>,
    seed: Option<u64>,
    output: Option<PathBuf>,
}

/// Flag values as parsed (None = not given on the command line).
#[derive(Debug, Clone, Default)]
pub struct ConfigFlags {
    pub tol: Option<f64>,
    pub restarts: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

/// defaults < config file < flags, then validate.
pub fn resolve(flags: &ConfigFlags) -> anyhow::Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Ok(path) = std::env::var(CONFIG_ENV_VAR) {
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("cannot read config file '{path}' from {CONFIG_ENV_VAR}"))?;
        let file: ConfigFile = serde_json::from_str(&text)
            .with_context(|| format!("config file '{path}' is not valid JSON"))?;
        if let Some(v) = file.tol {
            cfg.tol = v;
        }
        if let Some(v) = file.restarts {
            cfg.restarts = v;
        }
        if let Some(v) = file.samples {
            cfg.samples = v;
        }
        if let Some(v) = file.seed {
            cfg.seed = v;
        }
        if file.output.is_some() {
            cfg.output = file.output;
        }
    }
    if let Some(v) = flags.tol {
        cfg.tol = v;
    }
    if let Some(v) = flags.restarts {
        cfg.restarts = v;
    }
    if let Some(v) = flags.samples {
        cfg.samples = v;
    }
    if let Some(v) = flags.seed {
        cfg.seed = v;
    }
    if flags.output.is_some() {
        cfg.output = flags.output.clone();
    }

    if !cfg.tol.is_finite() || cfg.tol <= 0.0 {
        bail!("tol must be positive, got {}", cfg.tol);
    }
    if cfg.restarts < 1 {
        bail!("restarts must be at least 1");
    }
    if cfg.samples < 1 {
        bail!("samples must be at least 1");
    }
    Ok(cfg)
}
