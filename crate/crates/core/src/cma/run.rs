use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::params::CmaParams;
use super::state::{rank, Candidate, CmaState};
use super::termination::{TerminationConfig, TerminationReason};
use crate::error::CmaError;
use crate::objectives::ObjectiveInstance;
use crate::restart::HyperParams;
use crate::rng::Rng;

/// A best-so-far improvement: the evaluation index at which it happened and the value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub evals: u64,
    pub f: f64,
}

/// Result of one CMA-ES run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub hyper: HyperParams,
    pub evals: u64,
    pub generations: u64,
    pub best_f: f64,
    pub best_x: Vec<f64>,
    pub reason: TerminationReason,
    /// Strictly improving best-so-far values; eval counts are local to the run.
    pub trace: Vec<TracePoint>,
}

/// Knobs for [`run_single_with`] beyond the hyper-parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub budget: u64,
    pub target_f: Option<f64>,
    pub active: bool,
}

impl RunOptions {
    pub fn new(budget: u64) -> Self {
        Self {
            budget,
            target_f: None,
            active: true,
        }
    }

    pub fn target(mut self, target_f: Option<f64>) -> Self {
        self.target_f = target_f;
        self
    }

    pub fn active(mut self, active: bool) -> Self {
        self.active = active;
        self
    }
}

/// Runs weighted active CMA-ES from `m0` until a stop criterion fires.
pub fn run_single(
    objective: &ObjectiveInstance,
    theta: &HyperParams,
    m0: &[f64],
    budget: u64,
    target_f: Option<f64>,
    rng: &mut Rng,
) -> Result<RunRecord, CmaError> {
    run_single_with(
        objective,
        theta,
        m0,
        &RunOptions::new(budget).target(target_f),
        rng,
    )
}

/// [`run_single`] with explicit options. Also hands every finished generation
/// to `observer`.
pub fn run_single_observed(
    objective: &ObjectiveInstance,
    theta: &HyperParams,
    m0: &[f64],
    options: &RunOptions,
    rng: &mut Rng,
    mut observer: impl FnMut(&CmaState),
) -> Result<RunRecord, CmaError> {
    let dim = objective.dim();
    if m0.len() != dim {
        return Err(CmaError::InvalidArgument(format!(
            "m0 has {} coordinates, objective has {dim}",
            m0.len()
        )));
    }
    if theta.lambda < 2 {
        return Err(CmaError::InvalidArgument(format!(
            "lambda must be at least 2, got {}",
            theta.lambda
        )));
    }
    if options.budget < theta.lambda as u64 {
        return Err(CmaError::InvalidArgument(format!(
            "budget {} is smaller than lambda {}",
            options.budget, theta.lambda
        )));
    }
    let params = CmaParams::new(dim, theta.lambda, options.active)?;
    let mut state = CmaState::new(DVector::from_column_slice(m0), theta.sigma0)?;
    let term = TerminationConfig::new(dim, theta.lambda, theta.sigma0, options.budget);
    let mut trace: Vec<TracePoint> = Vec::new();

    let reason = loop {
        let samples = state.sample_population(&params, rng)?;
        let evals_before = state.evals;
        let mut candidates = Vec::with_capacity(samples.len());
        let mut failed = false;
        for (k, sample) in samples.into_iter().enumerate() {
            let f = objective.eval(sample.x.as_slice());
            match Candidate::new(sample, f) {
                Ok(c) => {
                    let best = trace.last().map_or(f64::INFINITY, |t| t.f);
                    if c.f < best {
                        trace.push(TracePoint {
                            evals: evals_before + k as u64 + 1,
                            f: c.f,
                        });
                    }
                    candidates.push(c);
                }
                Err(_) => {
                    state.evals = evals_before + k as u64 + 1;
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            if let Some(c) = candidates.iter().min_by(|a, b| a.f.total_cmp(&b.f)) {
                if c.f < state.best_f {
                    state.best_f = c.f;
                    state.best_x = Some(c.x.clone());
                }
            }
            break TerminationReason::NumericalFailure;
        }
        state.evals += params.lambda as u64;

        let ranked = rank(candidates);
        let old_mean = state.mean.clone();
        let old_sigma = state.sigma;
        let new_mean = state.update_mean(&ranked, &params)?;
        state.record_generation(&ranked);
        let shift = (new_mean - old_mean) / old_sigma;
        if state.update_paths_and_sigma(&params, &shift).is_err() {
            break TerminationReason::NumericalFailure;
        }
        state.update_covariance(&ranked, &params)?;
        state.generation += 1;
        if state.maybe_refresh_eigen(&params).is_err() {
            break TerminationReason::NumericalFailure;
        }
        observer(&state);
        if let Some(reason) = state.check_termination(&term, options.target_f) {
            break reason;
        }
    };

    Ok(RunRecord {
        hyper: theta.clone(),
        evals: state.evals,
        generations: state.generation,
        best_f: state.best_f,
        best_x: state
            .best_x
            .map(|x| x.as_slice().to_vec())
            .unwrap_or_else(|| m0.to_vec()),
        reason,
        trace,
    })
}

pub fn run_single_with(
    objective: &ObjectiveInstance,
    theta: &HyperParams,
    m0: &[f64],
    options: &RunOptions,
    rng: &mut Rng,
) -> Result<RunRecord, CmaError> {
    run_single_observed(objective, theta, m0, options, rng, |_| {})
}
