use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::float::format_float;
use super::metrics::{compute_ert, compute_sp1, median_evals, success_count};
use super::record::TrialRecord;
use crate::error::{ConfigError, ReportError};

pub const ERT_CSV_HEADER: &str =
    "function,dim,instance_seed,strategy,delta_f,ert,sp1,successes,trials,median_evals";

/// Statistics of one (function, dim, instance, strategy) cell at one Δf.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErtRow {
    pub function: String,
    pub dim: usize,
    pub instance_seed: u64,
    pub strategy: String,
    pub delta_f: f64,
    #[serde(with = "super::float")]
    pub ert: f64,
    #[serde(with = "super::float")]
    pub sp1: f64,
    pub successes: usize,
    pub trials: usize,
    #[serde(with = "super::float")]
    pub median_evals: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ErtReport {
    pub rows: Vec<ErtRow>,
}

impl ErtReport {
    /// Rows for one function/strategy at one Δf.
    pub fn find(&self, function: &str, strategy: &str, delta_f: f64) -> Option<&ErtRow> {
        self.rows
            .iter()
            .find(|r| r.function == function && r.strategy == strategy && r.delta_f == delta_f)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(ERT_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{:e},{},{},{},{},{}",
                r.function,
                r.dim,
                r.instance_seed,
                r.strategy,
                r.delta_f,
                format_float(r.ert),
                format_float(r.sp1),
                r.successes,
                r.trials,
                format_float(r.median_evals),
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

type CellKey = (String, usize, u64, String);

/// Groups records by cell (sorted by key) and evaluates every Δf.
pub fn aggregate(records: &[TrialRecord], delta_f: &[f64]) -> Result<ErtReport, ConfigError> {
    let mut cells: BTreeMap<CellKey, Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        cells
            .entry((
                r.function.clone(),
                r.dim,
                r.instance_seed,
                r.strategy.to_string(),
            ))
            .or_default()
            .push(r);
    }
    let mut rows = Vec::new();
    for ((function, dim, instance_seed, strategy), group) in cells {
        let f_opt = group[0].f_opt.ok_or_else(|| {
            ConfigError::Invalid(format!("records of `{function}` carry no f_opt"))
        })?;
        let owned: Vec<TrialRecord> = group.into_iter().cloned().collect();
        for &df in delta_f {
            rows.push(ErtRow {
                function: function.clone(),
                dim,
                instance_seed,
                strategy: strategy.clone(),
                delta_f: df,
                ert: compute_ert(&owned, f_opt, df),
                sp1: compute_sp1(&owned, f_opt, df),
                successes: success_count(&owned, f_opt, df),
                trials: owned.len(),
                median_evals: median_evals(&owned),
            });
        }
    }
    Ok(ErtReport { rows })
}

/// Writes `ert.csv` and `ert.json` into `dir`.
pub fn emit_reports(report: &ErtReport, dir: &Path) -> Result<(PathBuf, PathBuf), ReportError> {
    std::fs::create_dir_all(dir).map_err(|e| ReportError::io(dir, e))?;
    let csv = dir.join("ert.csv");
    std::fs::write(&csv, report.to_csv()).map_err(|e| ReportError::io(&csv, e))?;
    let json = dir.join("ert.json");
    std::fs::write(&json, report.to_json()).map_err(|e| ReportError::io(&json, e))?;
    Ok((csv, json))
}
