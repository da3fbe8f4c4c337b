use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cma::{TerminationReason, TracePoint};
use crate::error::ReportError;
use crate::restart::{Regime, RestartKind, StrategyResult};

/// One restart inside a trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestartSummary {
    pub restart_index: usize,
    pub regime: Regime,
    pub lambda: usize,
    pub sigma0: f64,
    pub evals: u64,
    #[serde(with = "super::float")]
    pub best_f: f64,
    pub reason: TerminationReason,
}

/// Persisted record of one trial: a full restart strategy on one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub function: String,
    pub dim: usize,
    pub instance_seed: u64,
    pub strategy: RestartKind,
    pub trial: usize,
    pub seed: u64,
    pub rng: String,
    pub f_opt: Option<f64>,
    pub budget: u64,
    pub total_evals: u64,
    #[serde(with = "super::float")]
    pub best_f: f64,
    pub best_x: Vec<f64>,
    pub restarts: Vec<RestartSummary>,
    /// Best-so-far improvements with eval counts over the whole trial.
    pub trace: Vec<TracePoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<f64>,
}

impl TrialRecord {
    /// File name `<function>_<dim>D_<strategy>_t<trial>.json`.
    pub fn file_name(&self) -> String {
        format!(
            "{}_{}D_{}_t{}.json",
            self.function, self.dim, self.strategy, self.trial
        )
    }

    /// Directory for records of one instance below a records root.
    pub fn instance_dir(root: &Path, instance_seed: u64) -> PathBuf {
        root.join(format!("instance-{instance_seed}"))
    }
}

/// Concatenates per-run traces into a trial-wide best-so-far trace.
pub fn merge_traces(result: &StrategyResult) -> Vec<TracePoint> {
    let mut out: Vec<TracePoint> = Vec::new();
    let mut offset = 0;
    for run in &result.runs {
        for p in &run.record.trace {
            if out.last().is_none_or(|last| p.f < last.f) {
                out.push(TracePoint {
                    evals: offset + p.evals,
                    f: p.f,
                });
            }
        }
        offset += run.record.evals;
    }
    out
}

pub fn summarize(result: &StrategyResult) -> Vec<RestartSummary> {
    result
        .runs
        .iter()
        .map(|r| RestartSummary {
            restart_index: r.restart_index,
            regime: r.record.hyper.regime,
            lambda: r.record.hyper.lambda,
            sigma0: r.record.hyper.sigma0,
            evals: r.record.evals,
            best_f: r.record.best_f,
            reason: r.record.reason,
        })
        .collect()
}

pub fn write_record(record: &TrialRecord, root: &Path) -> Result<PathBuf, ReportError> {
    let dir = TrialRecord::instance_dir(root, record.instance_seed);
    std::fs::create_dir_all(&dir).map_err(|e| ReportError::io(&dir, e))?;
    let path = dir.join(record.file_name());
    let mut text = serde_json::to_string_pretty(record).map_err(|source| ReportError::Json {
        path: path.clone(),
        source,
    })?;
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| ReportError::io(&path, e))?;
    Ok(path)
}

fn collect_json(dir: &Path, out: &mut Vec<PathBuf>) -> Result<(), ReportError> {
    let entries = std::fs::read_dir(dir).map_err(|e| ReportError::io(dir, e))?;
    for entry in entries {
        let path = entry.map_err(|e| ReportError::io(dir, e))?.path();
        if path.is_dir() {
            collect_json(&path, out)?;
        } else if path.extension().is_some_and(|e| e == "json") {
            out.push(path);
        }
    }
    Ok(())
}

/// Loads every trial record below `dir`, recursively, in path order.
/// JSON files that are not trial records are skipped.
pub fn load_records(dir: &Path) -> Result<Vec<TrialRecord>, ReportError> {
    let mut paths = Vec::new();
    collect_json(dir, &mut paths)?;
    paths.sort();
    let mut records = Vec::new();
    for path in paths {
        let text = std::fs::read_to_string(&path).map_err(|e| ReportError::io(&path, e))?;
        if let Ok(record) = serde_json::from_str::<TrialRecord>(&text) {
            records.push(record);
        }
    }
    Ok(records)
}
