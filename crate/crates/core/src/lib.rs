//! Weighted active CMA-ES with population/step-size restart strategies.
//!
//! The crate is split into four layers:
//!
//! - [`cma`]: a single restartable run of weighted active (μ/μ_w,λ)-CMA-ES.
//! - [`restart`]: the IPOP, BIPOP, NIPOP and NBIPOP meta-strategies that schedule
//!   successive runs in the (λ, σ⁰) hyper-parameter space.
//! - [`objectives`]: multi-modal benchmark functions with seeded shift/rotation
//!   instancing, bound normalization and an out-of-bounds penalty wrapper.
//! - [`harness`]: experiment configuration, ERT/SP1 statistics, grid scans and
//!   report persistence.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cma;
pub mod error;
pub mod harness;
pub mod objectives;
pub mod restart;
pub mod rng;

pub use cma::{
    default_lambda, run_single, Candidate, CmaParams, CmaState, RunRecord, TerminationConfig,
    TerminationReason, TracePoint,
};
pub use error::{CmaError, ConfigError, ObjectiveError, ReportError};
pub use objectives::{make_function, Bounds, ObjectiveInstance, PenaltyWrapper};
pub use restart::{
    run_with_restarts, HyperParams, Regime, RegimeLedger, RestartKind, RestartPolicy,
    StrategyResult,
};
pub use rng::Rng;
