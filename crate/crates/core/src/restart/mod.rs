//! Restart meta-strategies over the (λ, σ⁰) hyper-parameter space.
//!
//! IPOP doubles λ on every restart at fixed σ⁰. NIPOP additionally divides σ⁰
//! by `ρ_σdec` per restart. BIPOP alternates the IPOP schedule with runs whose
//! (λ, σ⁰) are drawn at random, always picking the regime that has consumed
//! fewer evaluations. NBIPOP pits the NIPOP schedule against default-λ runs with
//! log-uniform σ⁰ and grants the regime holding the best solution `ρ_budget`
//! times the other's budget.

mod engine;
mod policy;
mod schedule;

pub use engine::{
    run_with_executor, run_with_restarts, CmaExecutor, PlannedRun, RestartEngine, RestartRun,
    RunExecutor, StrategyResult,
};
pub use policy::{HyperParams, Regime, RestartKind, RestartPolicy};
pub use schedule::{
    bipop_draw_small, bipop_select_regime, bipop_small_from_uniforms, ipop_next,
    nbipop_draw_small, nbipop_select_regime, nbipop_small_from_uniform, nipop_next, Arm,
    BestOverall, RegimeLedger,
};
