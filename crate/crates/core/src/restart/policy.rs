use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cma::default_lambda;
use crate::error::ConfigError;
use crate::objectives::ObjectiveInstance;

/// Which rule produced a run's hyper-parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// The first run, at (λ_default, σ_default).
    Default,
    LargeSchedule,
    SmallRandom,
}

/// Hyper-parameters θ = (λ, σ⁰) of one CMA-ES run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperParams {
    pub lambda: usize,
    /// Absolute initial step size.
    pub sigma0: f64,
    pub regime: Regime,
}

impl HyperParams {
    pub fn new(lambda: usize, sigma0: f64, regime: Regime) -> Self {
        Self {
            lambda,
            sigma0,
            regime,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RestartKind {
    Ipop,
    Bipop,
    Nipop,
    Nbipop,
}

impl RestartKind {
    pub const ALL: [RestartKind; 4] = [Self::Ipop, Self::Bipop, Self::Nipop, Self::Nbipop];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ipop => "ipop",
            Self::Bipop => "bipop",
            Self::Nipop => "nipop",
            Self::Nbipop => "nbipop",
        }
    }

    /// Stable numeric id used in seed derivation.
    pub fn id(self) -> u64 {
        match self {
            Self::Ipop => 0,
            Self::Bipop => 1,
            Self::Nipop => 2,
            Self::Nbipop => 3,
        }
    }
}

impl fmt::Display for RestartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RestartKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        let trimmed = lower.trim_end_matches("-es").trim_end_matches("-acma");
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == trimmed)
            .ok_or_else(|| ConfigError::UnknownStrategy(s.to_string()))
    }
}

/// A restart meta-strategy with its schedule constants and budgets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestartPolicy {
    pub kind: RestartKind,
    /// Population growth factor per large-schedule restart.
    pub rho_inc: f64,
    /// σ⁰ divisor per NIPOP-schedule restart.
    pub rho_sigma_dec: f64,
    /// Budget multiplier granted to the regime holding the best solution.
    pub rho_budget: f64,
    pub lambda_default: usize,
    pub sigma_default: f64,
    pub sigma_floor: f64,
    /// Restarts after the first run.
    pub max_restarts: usize,
    pub total_budget: u64,
    /// Absolute objective value that ends the strategy when reached.
    pub target_f: Option<f64>,
    /// Active covariance update in every run.
    pub active: bool,
    /// Whether BIPOP/NBIPOP may pick their small-population regime.
    pub small_arm: bool,
}

impl RestartPolicy {
    /// Defaults for a problem of dimension `dim` whose narrowest box side is `width`:
    /// `σ_default = 0.2·width`, `λ_default = 4 + ⌊3 ln D⌋`.
    pub fn new(kind: RestartKind, dim: usize, width: f64) -> Self {
        let lambda_default = default_lambda(dim);
        let sigma_default = 0.2 * width;
        Self {
            kind,
            rho_inc: 2.0,
            rho_sigma_dec: 1.6,
            rho_budget: 2.0,
            lambda_default,
            sigma_default,
            sigma_floor: 1e-2 * sigma_default,
            max_restarts: 30,
            total_budget: 50_000 * dim as u64 * lambda_default as u64,
            target_f: None,
            active: true,
            small_arm: true,
        }
    }

    pub fn for_objective(kind: RestartKind, objective: &ObjectiveInstance) -> Self {
        Self::new(kind, objective.dim(), objective.bounds().min_width())
    }

    pub fn with_budget(mut self, total_budget: u64) -> Self {
        self.total_budget = total_budget;
        self
    }

    pub fn with_target(mut self, target_f: Option<f64>) -> Self {
        self.target_f = target_f;
        self
    }

    pub fn with_max_restarts(mut self, max_restarts: usize) -> Self {
        self.max_restarts = max_restarts;
        self
    }

    /// The first run's hyper-parameters.
    pub fn default_hyper(&self) -> HyperParams {
        HyperParams::new(self.lambda_default, self.sigma_default, Regime::Default)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if !(self.rho_inc > 1.0) {
            return bad(format!("rho_inc must exceed 1, got {}", self.rho_inc));
        }
        if !(self.rho_sigma_dec >= 1.0) {
            return bad(format!("rho_sigma_dec must be at least 1, got {}", self.rho_sigma_dec));
        }
        if !(self.rho_budget >= 1.0) {
            return bad(format!("rho_budget must be at least 1, got {}", self.rho_budget));
        }
        if !(self.sigma_floor > 0.0) {
            return bad(format!("sigma_floor must be positive, got {}", self.sigma_floor));
        }
        if !(self.sigma_default > 0.0 && self.sigma_default.is_finite()) {
            return bad(format!("sigma_default must be positive, got {}", self.sigma_default));
        }
        if self.lambda_default < 2 {
            return bad(format!("lambda_default must be at least 2, got {}", self.lambda_default));
        }
        if self.total_budget < self.lambda_default as u64 {
            return bad(format!(
                "total budget {} is below lambda_default {}",
                self.total_budget, self.lambda_default
            ));
        }
        Ok(())
    }
}
