//! Experiment configuration: a flat key = value text format with
//! comma-separated list values, plus an environment override for the data
//! path.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

/// Environment variable that overrides the configured dataset path.
pub const DATA_PATH_ENV: &str = "HTRU2_PATH";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelId {
    Logreg,
    Qsvm,
    QlrAngle,
    QlrAmplitude,
    QlrDr,
}

impl ModelId {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelId::Logreg => "logreg",
            ModelId::Qsvm => "qsvm",
            ModelId::QlrAngle => "qlr-angle",
            ModelId::QlrAmplitude => "qlr-amplitude",
            ModelId::QlrDr => "qlr-dr",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "logreg" => Ok(ModelId::Logreg),
            "qsvm" => Ok(ModelId::Qsvm),
            "qlr-angle" => Ok(ModelId::QlrAngle),
            "qlr-amplitude" => Ok(ModelId::QlrAmplitude),
            "qlr-dr" => Ok(ModelId::QlrDr),
            other => Err(Error::Config(format!(
                "unknown model '{other}' (expected logreg, qsvm, qlr-angle, qlr-amplitude, qlr-dr)"
            ))),
        }
    }

    /// Whether the depth grid applies; baselines run once per (seed, N).
    pub fn uses_depth(&self) -> bool {
        matches!(self, ModelId::QlrAngle | ModelId::QlrAmplitude | ModelId::QlrDr)
    }

    pub fn is_qlr(&self) -> bool {
        self.uses_depth()
    }
}

impl std::fmt::Display for ModelId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThreadMode {
    Single,
    Parallel,
}

impl ThreadMode {
    pub fn is_parallel(&self) -> bool {
        matches!(self, ThreadMode::Parallel)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub models: Vec<ModelId>,
    pub n_list: Vec<usize>,
    pub depth_list: Vec<usize>,
    pub alpha: f64,
    pub seeds: Vec<u64>,
    pub data_path: PathBuf,
    pub out_dir: PathBuf,
    pub threads: ThreadMode,
    pub max_epochs: usize,
    pub iqp_repetitions: usize,
    pub export_kernels: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            models: vec![ModelId::Logreg, ModelId::QlrAngle],
            n_list: vec![1000],
            depth_list: vec![3],
            alpha: 1.0,
            seeds: vec![0, 1, 2],
            data_path: PathBuf::from("HTRU_2.csv"),
            out_dir: PathBuf::from("out"),
            threads: ThreadMode::Single,
            max_epochs: 200,
            iqp_repetitions: 2,
            export_kernels: false,
        }
    }
}

fn parse_list<T: std::str::FromStr>(value: &str, key: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|item| {
            item.trim()
                .parse::<T>()
                .map_err(|_| Error::Config(format!("invalid entry '{item}' in '{key}'")))
        })
        .collect()
}

impl ExperimentConfig {
    /// Parses the flat key = value format; `#` starts a comment line.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_str_content(&text)
    }

    pub fn from_str_content(text: &str) -> Result<Self> {
        let mut pairs = BTreeMap::new();
        for (line_no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected 'key = value'", line_no + 1))
            })?;
            pairs.insert(key.trim().to_string(), value.trim().to_string());
        }

        let mut cfg = ExperimentConfig::default();
        for (key, value) in &pairs {
            match key.as_str() {
                "models" => {
                    cfg.models = value
                        .split(',')
                        .map(|m| ModelId::parse(m.trim()))
                        .collect::<Result<_>>()?;
                }
                "n" => cfg.n_list = parse_list(value, key)?,
                "l" => cfg.depth_list = parse_list(value, key)?,
                "alpha" => {
                    cfg.alpha = value
                        .parse()
                        .map_err(|_| Error::Config(format!("invalid alpha '{value}'")))?;
                }
                "seeds" => cfg.seeds = parse_list(value, key)?,
                "data" => cfg.data_path = PathBuf::from(value),
                "out" => cfg.out_dir = PathBuf::from(value),
                "threads" => {
                    cfg.threads = match value.as_str() {
                        "single" => ThreadMode::Single,
                        "parallel" => ThreadMode::Parallel,
                        other => {
                            return Err(Error::Config(format!(
                                "threads must be 'single' or 'parallel', got '{other}'"
                            )))
                        }
                    };
                }
                "max_epochs" => {
                    cfg.max_epochs = value
                        .parse()
                        .map_err(|_| Error::Config(format!("invalid max_epochs '{value}'")))?;
                }
                "iqp_repetitions" => {
                    cfg.iqp_repetitions = value.parse().map_err(|_| {
                        Error::Config(format!("invalid iqp_repetitions '{value}'"))
                    })?;
                }
                "export_kernels" => {
                    cfg.export_kernels = value.parse().map_err(|_| {
                        Error::Config(format!("export_kernels must be true/false, got '{value}'"))
                    })?;
                }
                other => {
                    return Err(Error::Config(format!("unknown configuration key '{other}'")));
                }
            }
        }
        cfg.apply_env_override();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply_env_override(&mut self) {
        if let Ok(path) = std::env::var(DATA_PATH_ENV) {
            if !path.is_empty() {
                self.data_path = PathBuf::from(path);
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::Config("seeds must be non-empty".into()));
        }
        if self.models.is_empty() {
            return Err(Error::Config("models must be non-empty".into()));
        }
        if self.n_list.is_empty() || self.n_list.iter().any(|&n| n == 0) {
            return Err(Error::Config("n values must be positive".into()));
        }
        if self.depth_list.is_empty() || self.depth_list.iter().any(|&l| l == 0) {
            return Err(Error::Config("l values must be positive".into()));
        }
        if self.alpha <= 0.0 || !self.alpha.is_finite() {
            return Err(Error::Config(format!("alpha must be positive, got {}", self.alpha)));
        }
        if self.max_epochs == 0 || self.iqp_repetitions == 0 {
            return Err(Error::Config("max_epochs and iqp_repetitions must be positive".into()));
        }
        Ok(())
    }
}
