use rand::RngCore;

use super::policy::{HyperParams, RestartKind, RestartPolicy};
use super::schedule::{
    bipop_draw_small, bipop_select_regime, ipop_next, nbipop_draw_small, nbipop_select_regime,
    nipop_next, Arm, RegimeLedger,
};
use crate::cma::{run_single_with, RunOptions, RunRecord, TerminationReason};
use crate::error::{CmaError, ConfigError};
use crate::objectives::ObjectiveInstance;
use crate::rng::{seeded, Rng};

/// The next run the engine wants executed.
#[derive(Clone, Debug, PartialEq)]
pub struct PlannedRun {
    pub hyper: HyperParams,
    /// 0 for the first run, counting every restart regardless of regime.
    pub restart_index: usize,
    /// Evaluations this run may use.
    pub budget: u64,
    pub target_f: Option<f64>,
    pub active: bool,
}

/// Sequential restart scheduler.
///
/// Call [`next_run`](Self::next_run), execute the plan, then hand the result
/// to [`record`](Self::record) before asking for the next one.
#[derive(Clone, Debug)]
pub struct RestartEngine {
    policy: RestartPolicy,
    ledger: RegimeLedger,
    /// Next index on the large (IPOP/NIPOP) schedule.
    large_index: u32,
    runs: usize,
    target_hit: bool,
}

impl RestartEngine {
    pub fn new(policy: RestartPolicy) -> Result<Self, ConfigError> {
        policy.validate()?;
        Ok(Self {
            policy,
            ledger: RegimeLedger::default(),
            large_index: 0,
            runs: 0,
            target_hit: false,
        })
    }

    pub fn policy(&self) -> &RestartPolicy {
        &self.policy
    }

    pub fn ledger(&self) -> &RegimeLedger {
        &self.ledger
    }

    pub fn target_hit(&self) -> bool {
        self.target_hit
    }

    fn large(&self, i: u32) -> HyperParams {
        match self.policy.kind {
            RestartKind::Ipop | RestartKind::Bipop => ipop_next(i, &self.policy),
            RestartKind::Nipop | RestartKind::Nbipop => nipop_next(i, &self.policy),
        }
    }

    /// Plans the next run, or `None` once the target was hit, the restart
    /// limit is reached or the remaining budget cannot fit the next population.
    pub fn next_run(&mut self, rng: &mut Rng) -> Option<PlannedRun> {
        if self.target_hit || self.runs > self.policy.max_restarts {
            return None;
        }
        let remaining = self
            .policy
            .total_budget
            .saturating_sub(self.ledger.total_evals());
        let arm = if self.runs == 0 || !self.policy.small_arm {
            Arm::Large
        } else {
            match self.policy.kind {
                RestartKind::Ipop | RestartKind::Nipop => Arm::Large,
                RestartKind::Bipop => bipop_select_regime(&self.ledger),
                RestartKind::Nbipop => nbipop_select_regime(&self.ledger, self.policy.rho_budget),
            }
        };
        let hyper = match arm {
            Arm::Large => self.large(self.large_index),
            Arm::Small => match self.policy.kind {
                RestartKind::Bipop => {
                    let lambda_large = self.large(self.large_index).lambda;
                    bipop_draw_small(&self.policy, lambda_large, rng)
                }
                _ => nbipop_draw_small(&self.policy, rng),
            },
        };
        if hyper.lambda as u64 > remaining {
            return None;
        }
        if arm == Arm::Large {
            self.large_index += 1;
        }
        let plan = PlannedRun {
            hyper,
            restart_index: self.runs,
            budget: remaining,
            target_f: self.policy.target_f,
            active: self.policy.active,
        };
        self.runs += 1;
        Some(plan)
    }

    /// Books a finished run into the ledger.
    pub fn record(&mut self, plan: &PlannedRun, evals: u64, best_f: f64, reason: TerminationReason) {
        self.ledger.record(Arm::from(plan.hyper.regime), evals, best_f);
        let reached = self.policy.target_f.is_some_and(|t| best_f <= t);
        if reason == TerminationReason::TargetHit || reached {
            self.target_hit = true;
        }
    }
}

/// Executes planned runs. The CMA-ES implementation is [`CmaExecutor`]; tests
/// substitute scripted executors.
pub trait RunExecutor {
    fn execute(&mut self, plan: &PlannedRun, rng: &mut Rng) -> Result<RunRecord, CmaError>;
}

/// Runs CMA-ES on an objective, starting each run from a uniform point in its box.
#[derive(Clone, Debug)]
pub struct CmaExecutor<'a> {
    pub objective: &'a ObjectiveInstance,
}

impl RunExecutor for CmaExecutor<'_> {
    fn execute(&mut self, plan: &PlannedRun, rng: &mut Rng) -> Result<RunRecord, CmaError> {
        let m0 = self.objective.bounds().sample_uniform(rng);
        let options = RunOptions::new(plan.budget)
            .target(plan.target_f)
            .active(plan.active);
        run_single_with(self.objective, &plan.hyper, &m0, &options, rng)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RestartRun {
    pub restart_index: usize,
    pub record: RunRecord,
}

/// Outcome of a full restart strategy.
#[derive(Clone, Debug, PartialEq)]
pub struct StrategyResult {
    pub best_f: f64,
    pub best_x: Vec<f64>,
    pub runs: Vec<RestartRun>,
    pub total_evals: u64,
    pub ledger: RegimeLedger,
    pub target_hit: bool,
}

impl StrategyResult {
    pub fn hypers(&self) -> impl Iterator<Item = &HyperParams> {
        self.runs.iter().map(|r| &r.record.hyper)
    }
}

/// Drives `executor` through the restart schedule of `policy`.
///
/// Each run gets its own ChaCha stream seeded from `rng`, so the engine's own
/// draws do not depend on how many numbers a run consumes.
pub fn run_with_executor<E: RunExecutor>(
    policy: &RestartPolicy,
    executor: &mut E,
    rng: &mut Rng,
) -> Result<StrategyResult, ConfigError> {
    let mut engine = RestartEngine::new(policy.clone())?;
    let mut runs = Vec::new();
    let mut best_f = f64::INFINITY;
    let mut best_x = Vec::new();
    while let Some(plan) = engine.next_run(rng) {
        let mut run_rng = seeded(rng.next_u64());
        let Ok(record) = executor.execute(&plan, &mut run_rng) else {
            break;
        };
        engine.record(&plan, record.evals, record.best_f, record.reason);
        if record.best_f < best_f {
            best_f = record.best_f;
            best_x = record.best_x.clone();
        }
        runs.push(RestartRun {
            restart_index: plan.restart_index,
            record,
        });
    }
    let ledger = *engine.ledger();
    Ok(StrategyResult {
        best_f,
        best_x,
        total_evals: runs.iter().map(|r| r.record.evals).sum(),
        runs,
        ledger,
        target_hit: engine.target_hit(),
    })
}

/// Restarted CMA-ES on `objective` under `policy`.
pub fn run_with_restarts(
    objective: &ObjectiveInstance,
    policy: &RestartPolicy,
    rng: &mut Rng,
) -> Result<StrategyResult, ConfigError> {
    run_with_executor(policy, &mut CmaExecutor { objective }, rng)
}
