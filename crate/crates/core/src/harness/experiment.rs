use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::record::{merge_traces, summarize, write_record, TrialRecord};
use super::report::{aggregate, emit_reports, ErtReport};
use crate::error::{ConfigError, ReportError};
use crate::objectives::{function_id, make_function, ObjectiveInstance};
use crate::restart::{run_with_restarts, RestartKind, RestartPolicy};
use crate::rng::{derive_seed, seeded, RNG_ALGORITHM};

/// Coordinates of one trial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialCell {
    pub function: String,
    pub dim: usize,
    pub instance_seed: u64,
    pub strategy: RestartKind,
    pub trial: usize,
}

impl TrialCell {
    /// Seed from (base seed, function id, dim, instance, strategy id, trial).
    /// Depends only on the cell's own coordinates.
    pub fn seed(&self, base_seed: u64) -> u64 {
        let fid = function_id(&self.function).unwrap_or(u64::MAX);
        derive_seed(
            base_seed,
            &[
                fid,
                self.dim as u64,
                self.instance_seed,
                self.strategy.id(),
                self.trial as u64,
            ],
        )
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub report: ErtReport,
    pub records: Vec<TrialRecord>,
    /// Files written, when an output directory was given.
    pub written: Vec<PathBuf>,
}

/// All trial cells in config order.
pub fn cells(config: &ExperimentConfig) -> Result<Vec<TrialCell>, ConfigError> {
    let kinds = config.kinds()?;
    let mut out = Vec::new();
    for function in &config.functions {
        for &dim in &config.dims {
            for &instance_seed in &config.instance_seeds {
                for &strategy in &kinds {
                    for trial in 0..config.trials {
                        out.push(TrialCell {
                            function: function.clone(),
                            dim,
                            instance_seed,
                            strategy,
                            trial,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Policy of one cell: defaults for the objective, config overrides, the trial
/// budget and a target at `f_opt + min Δf`.
pub fn cell_policy(
    config: &ExperimentConfig,
    kind: RestartKind,
    objective: &ObjectiveInstance,
) -> RestartPolicy {
    let smallest = config.delta_f.iter().copied().fold(f64::INFINITY, f64::min);
    let target = objective.f_opt().map(|f| f + smallest);
    config
        .policy
        .apply(RestartPolicy::for_objective(kind, objective))
        .with_budget(config.budget)
        .with_target(target)
}

/// Runs one trial.
pub fn run_trial(
    config: &ExperimentConfig,
    cell: &TrialCell,
    objective: &ObjectiveInstance,
    base_seed: u64,
) -> Result<TrialRecord, ConfigError> {
    let seed = cell.seed(base_seed);
    let policy = cell_policy(config, cell.strategy, objective);
    let started = Instant::now();
    let result = run_with_restarts(objective, &policy, &mut seeded(seed))?;
    let elapsed = started.elapsed().as_secs_f64() * 1e3;
    Ok(TrialRecord {
        function: cell.function.clone(),
        dim: cell.dim,
        instance_seed: cell.instance_seed,
        strategy: cell.strategy,
        trial: cell.trial,
        seed,
        rng: RNG_ALGORITHM.to_string(),
        f_opt: objective.f_opt(),
        budget: config.budget,
        total_evals: result.total_evals,
        best_f: result.best_f,
        best_x: result.best_x.clone(),
        restarts: summarize(&result),
        trace: merge_traces(&result),
        wall_clock_ms: config.record_timing.then_some(elapsed),
    })
}

/// Runs every cell of `config` in parallel, writes one record per trial under
/// `<out>/records/` as it completes, then writes `ert.csv` and `ert.json`.
///
/// Configuration errors surface before any trial starts.
pub fn run_experiment(
    config: &ExperimentConfig,
    base_seed: u64,
    out: Option<&Path>,
) -> Result<ExperimentOutput, ReportError> {
    config.validate()?;
    let cells = cells(config)?;

    let mut objectives = Vec::new();
    for function in &config.functions {
        for &dim in &config.dims {
            for &seed in &config.instance_seeds {
                let obj = make_function(function, dim, seed)
                    .map_err(|e| ConfigError::Invalid(e.to_string()))?;
                for kind in config.kinds()? {
                    cell_policy(config, kind, &obj).validate()?;
                }
                objectives.push(obj);
            }
        }
    }
    let objective_for = |cell: &TrialCell| {
        objectives
            .iter()
            .find(|o| {
                o.name() == cell.function
                    && o.dim() == cell.dim
                    && o.instance_seed() == cell.instance_seed
            })
            .expect("objective built for every cell")
    };

    let records_root = out.map(|o| o.join("records"));
    let results: Vec<Result<(TrialRecord, Option<PathBuf>), ReportError>> = cells
        .par_iter()
        .map(|cell| {
            let record = run_trial(config, cell, objective_for(cell), base_seed)?;
            let path = match &records_root {
                Some(root) => Some(write_record(&record, root)?),
                None => None,
            };
            Ok((record, path))
        })
        .collect();

    let mut records = Vec::with_capacity(results.len());
    let mut written = Vec::new();
    for r in results {
        let (record, path) = r?;
        records.push(record);
        written.extend(path);
    }
    let report = aggregate(&records, &config.delta_f)?;
    if let Some(dir) = out {
        let (csv, json) = emit_reports(&report, dir)?;
        written.push(csv);
        written.push(json);
    }
    Ok(ExperimentOutput {
        report,
        records,
        written,
    })
}
