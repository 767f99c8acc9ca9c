//! Experiment configuration file.
//!
//! A flat key-value TOML document with one section per subsystem. Every key
//! is optional (defaults below); unknown keys and unknown framework names are
//! rejected.
//!
//! ```toml
//! [run]
//! frameworks = ["proposed", "comp1", "comp2", "comp3"]
//! seeds = [1, 2, 3]
//! out = "runs"
//! final_window = 100
//! random_walk_episodes = 200
//! random_walk_seed = 20220815
//! eval_episodes = 50
//!
//! [env]
//! episode_length = 100
//!
//! [trainer]
//! epochs = 1000
//!
//! [model]
//! logit_scale = 1.0
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::env::EnvConfig;
use crate::framework::{FrameworkRegistry, ModelConfig};
use crate::trainer::TrainerConfig;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config: {0}")]
    Parse(String),
    #[error("config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub frameworks: Vec<String>,
    pub seeds: Vec<u64>,
    pub out: PathBuf,
    /// Epochs averaged at the end of each run for the summary.
    pub final_window: usize,
    pub random_walk_episodes: usize,
    pub random_walk_seed: u64,
    /// Greedy episodes per run for `evaluate`.
    pub eval_episodes: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            frameworks: ["proposed", "comp1", "comp2", "comp3"]
                .map(String::from)
                .to_vec(),
            seeds: vec![1, 2, 3],
            out: PathBuf::from("runs"),
            final_window: 100,
            random_walk_episodes: 200,
            random_walk_seed: 20_220_815,
            eval_episodes: 50,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub run: RunConfig,
    pub env: EnvConfig,
    pub trainer: TrainerConfig,
    pub model: ModelConfig,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| ConfigError::Parse(e.message().to_string()))?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self, registry: &FrameworkRegistry) -> Result<(), ConfigError> {
        self.env
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.trainer
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if self.run.frameworks.is_empty() {
            return Err(ConfigError::Invalid("run.frameworks is empty".into()));
        }
        for name in &self.run.frameworks {
            if registry.get(name).is_none() {
                return Err(ConfigError::Invalid(format!(
                    "unknown framework `{name}` (known: {})",
                    registry.names().join(", ")
                )));
            }
        }
        if self.run.seeds.is_empty() {
            return Err(ConfigError::Invalid("run.seeds is empty".into()));
        }
        if self.run.final_window == 0 {
            return Err(ConfigError::Invalid("run.final_window must be positive".into()));
        }
        if self.run.random_walk_episodes == 0 {
            return Err(ConfigError::Invalid(
                "run.random_walk_episodes must be positive".into(),
            ));
        }
        if !(self.model.logit_scale > 0.0) {
            return Err(ConfigError::Invalid("model.logit_scale must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_all_defaults() {
        assert_eq!(ExperimentConfig::from_toml("").unwrap(), ExperimentConfig::default());
    }

    #[test]
    fn unknown_key_is_named() {
        let err = ExperimentConfig::from_toml("[trainer]\nlearning_rate = 0.1\n").unwrap_err();
        assert!(err.to_string().contains("learning_rate"), "{err}");
        let err = ExperimentConfig::from_toml("[optimizer]\nx = 1\n").unwrap_err();
        assert!(err.to_string().contains("optimizer"), "{err}");
    }

    #[test]
    fn unknown_framework_rejected() {
        let cfg = ExperimentConfig::from_toml("[run]\nframeworks = [\"proposed\", \"dqn\"]\n").unwrap();
        let err = cfg.validate(&FrameworkRegistry::default()).unwrap_err();
        assert!(err.to_string().contains("dqn"));
    }

    #[test]
    fn toml_round_trip() {
        let mut cfg = ExperimentConfig::default();
        cfg.trainer.epochs = 17;
        cfg.env.seed = 4;
        cfg.run.frameworks = vec!["random".into()];
        assert_eq!(ExperimentConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn invalid_values() {
        let cfg = ExperimentConfig::from_toml("[trainer]\ngamma = 1.5\n").unwrap();
        assert!(cfg.validate(&FrameworkRegistry::default()).is_err());
    }
}
