use std::fmt;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::state::CmaState;

/// Why a run stopped. Exactly one is reported per run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TerminationReason {
    TargetHit,
    MaxEvals,
    TolFunHist,
    TolX,
    ConditionCov,
    NoEffectAxis,
    NoEffectCoord,
    Stagnation,
    /// NaN from the objective, non-finite step size or a failed eigendecomposition.
    NumericalFailure,
}

impl fmt::Display for TerminationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Stopping thresholds for one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TerminationConfig {
    /// Evaluation budget; the run stops before a generation that would exceed it.
    pub max_evals: u64,
    pub lambda: u64,
    pub tol_fun: f64,
    /// Generations of best-value history inspected by `TolFunHist`.
    pub tol_fun_window: usize,
    pub tol_x: f64,
    pub max_condition: f64,
    /// Perturbation scale, in units of σ, for the no-effect tests.
    pub no_effect_scale: f64,
    pub stagnation_window: usize,
}

impl TerminationConfig {
    pub fn new(dim: usize, lambda: usize, sigma0: f64, max_evals: u64) -> Self {
        let d = dim as f64;
        let l = lambda as f64;
        Self {
            max_evals,
            lambda: lambda as u64,
            tol_fun: 1e-12,
            tol_fun_window: 10 + (30.0 * d / l).ceil() as usize,
            tol_x: 1e-12 * sigma0,
            max_condition: 1e14,
            no_effect_scale: 0.1,
            stagnation_window: 120 + (30.0 * d / l).ceil() as usize,
        }
    }
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Stagnation: over the window, neither the best nor the median value of the
/// latest 20 generations improved on the earliest 20.
fn stagnated(history: &[f64], window: usize) -> bool {
    const SLICE: usize = 20;
    if history.len() < window || window < 2 * SLICE {
        return false;
    }
    let recent = &history[history.len() - window..];
    median(&recent[window - SLICE..]) >= median(&recent[..SLICE])
}

impl CmaState {
    /// First matching stop criterion, `TargetHit` and `MaxEvals` before the rest.
    pub fn check_termination(
        &self,
        config: &TerminationConfig,
        target_f: Option<f64>,
    ) -> Option<TerminationReason> {
        use TerminationReason::*;
        if let Some(target) = target_f {
            if self.best_f <= target {
                return Some(TargetHit);
            }
        }
        if self.evals >= config.max_evals || self.evals + config.lambda > config.max_evals {
            return Some(MaxEvals);
        }
        let hist = &self.best_history;
        if hist.len() >= config.tol_fun_window {
            let window = &hist[hist.len() - config.tol_fun_window..];
            let hi = window.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = window.iter().copied().fold(f64::INFINITY, f64::min);
            if hi - lo < config.tol_fun && self.last_range < config.tol_fun {
                return Some(TolFunHist);
            }
        }
        let tol_x_hit = (0..self.dim()).all(|i| {
            self.sigma * self.p_c[i].abs().max(self.cov[(i, i)].sqrt()) < config.tol_x
        });
        if tol_x_hit {
            return Some(TolX);
        }
        if self.condition() > config.max_condition {
            return Some(ConditionCov);
        }
        let axis = (self.generation as usize) % self.dim();
        let step: DVector<f64> = self.eigen_basis.column(axis)
            * (config.no_effect_scale * self.sigma * self.eigen_values[axis].sqrt());
        if self.mean.iter().zip(step.iter()).all(|(m, s)| m + s == *m) {
            return Some(NoEffectAxis);
        }
        let coord_dead = (0..self.dim()).any(|i| {
            let m = self.mean[i];
            m + config.no_effect_scale * self.sigma * self.cov[(i, i)].sqrt() == m
        });
        if coord_dead {
            return Some(NoEffectCoord);
        }
        if stagnated(&self.best_history, config.stagnation_window)
            && stagnated(&self.median_history, config.stagnation_window)
        {
            return Some(Stagnation);
        }
        None
    }
}
