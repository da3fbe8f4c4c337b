//! Experiment runner, ERT/SP1 statistics, hyper-parameter grid scans and
//! report persistence.

mod config;
mod experiment;
pub mod float;
mod grid;
mod metrics;
mod record;
mod report;

pub use config::{default_delta_f, ExperimentConfig, PolicyOverrides, SEED_ENV};
pub use experiment::{cell_policy, cells, run_experiment, run_trial, ExperimentOutput, TrialCell};
pub use grid::{grid_scan, CellOutcome, GridCell, GridReport, GridSpec, GRID_PRECISION};
pub use metrics::{
    compute_ert, compute_sp1, evals_to_target, median, median_evals, success_count, TrialTrace,
};
pub use record::{load_records, merge_traces, summarize, write_record, RestartSummary, TrialRecord};
pub use report::{aggregate, emit_reports, ErtReport, ErtRow, ERT_CSV_HEADER};
