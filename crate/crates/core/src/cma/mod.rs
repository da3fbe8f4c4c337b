//! One instance of weighted active (μ/μ_w,λ)-CMA-ES.

mod params;
mod run;
mod state;
mod termination;

pub use params::{default_lambda, CmaParams};
pub use run::{run_single, run_single_observed, run_single_with, RunOptions, RunRecord, TracePoint};
pub use state::{rank, Candidate, CmaState, Repair, Sample, EIGEN_FLOOR};
pub use termination::{TerminationConfig, TerminationReason};
