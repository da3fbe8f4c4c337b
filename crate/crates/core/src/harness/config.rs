use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::objectives::function_id;
use crate::restart::{RestartKind, RestartPolicy};

/// Environment variable that overrides the configured base seed.
pub const SEED_ENV: &str = "RESTART_CMA_SEED";

/// Optional overrides of [`RestartPolicy`] constants.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_inc: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_sigma_dec: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_budget: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_restarts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub active: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub small_arm: Option<bool>,
}

impl PolicyOverrides {
    pub fn apply(&self, mut policy: RestartPolicy) -> RestartPolicy {
        if let Some(v) = self.rho_inc {
            policy.rho_inc = v;
        }
        if let Some(v) = self.rho_sigma_dec {
            policy.rho_sigma_dec = v;
        }
        if let Some(v) = self.rho_budget {
            policy.rho_budget = v;
        }
        if let Some(v) = self.max_restarts {
            policy.max_restarts = v;
        }
        if let Some(v) = self.active {
            policy.active = v;
        }
        if let Some(v) = self.small_arm {
            policy.small_arm = v;
        }
        policy
    }
}

fn default_instance_seeds() -> Vec<u64> {
    vec![1]
}

fn default_trials() -> usize {
    15
}

/// Δf = 10^1, 10^0, …, 10^-8.
pub fn default_delta_f() -> Vec<f64> {
    (-8..=1).rev().map(|e| 10f64.powi(e)).collect()
}

/// An experiment: every (function, dim, instance, strategy) cell gets `trials`
/// independent restart-strategy runs with `budget` evaluations each.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub functions: Vec<String>,
    pub dims: Vec<usize>,
    #[serde(default = "default_instance_seeds")]
    pub instance_seeds: Vec<u64>,
    pub strategies: Vec<String>,
    #[serde(default)]
    pub policy: PolicyOverrides,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Evaluation budget per trial.
    pub budget: u64,
    #[serde(default = "default_delta_f")]
    pub delta_f: Vec<f64>,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Store wall-clock time in run records. Off by default because it makes
    /// records differ between reruns.
    #[serde(default)]
    pub record_timing: bool,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn kinds(&self) -> Result<Vec<RestartKind>, ConfigError> {
        self.strategies.iter().map(|s| s.parse()).collect()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        for f in &self.functions {
            if function_id(f).is_none() {
                return Err(ConfigError::UnknownFunction(f.clone()));
            }
        }
        self.kinds()?;
        if self.functions.is_empty() || self.dims.is_empty() || self.strategies.is_empty() {
            return bad("functions, dims and strategies must be non-empty");
        }
        if self.instance_seeds.is_empty() {
            return bad("instance_seeds must be non-empty");
        }
        if self.dims.iter().any(|&d| d < 2) {
            return bad("dimensions must be at least 2");
        }
        if self.trials < 1 {
            return bad("trials must be at least 1");
        }
        if self.budget == 0 {
            return bad("budget must be positive");
        }
        if self.delta_f.is_empty() || self.delta_f.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
            return bad("delta_f values must be positive and finite");
        }
        if self.delta_f.windows(2).any(|w| w[0] <= w[1]) {
            return bad("delta_f must be sorted strictly descending");
        }
        Ok(())
    }

    /// Base seed after the environment override.
    pub fn resolved_seed(&self, env: Option<&str>) -> Result<u64, ConfigError> {
        match env {
            Some(v) => v.trim().parse().map_err(|_| {
                ConfigError::Invalid(format!("{SEED_ENV}={v} is not an unsigned integer"))
            }),
            None => Ok(self.base_seed),
        }
    }
}
