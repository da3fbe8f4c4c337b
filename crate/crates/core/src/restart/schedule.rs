use rand::Rng as _;

use super::policy::{HyperParams, Regime, RestartPolicy};
use crate::rng::Rng;

/// Budget-accounting side of a two-regime strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Arm {
    Large,
    Small,
}

impl From<Regime> for Arm {
    /// The first run belongs to the large schedule (it is its i = 0 point).
    fn from(r: Regime) -> Self {
        match r {
            Regime::Default | Regime::LargeSchedule => Arm::Large,
            Regime::SmallRandom => Arm::Small,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BestOverall {
    pub f: f64,
    pub arm: Arm,
}

/// Per-regime evaluation and best-value accounting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegimeLedger {
    pub evals_large: u64,
    pub evals_small: u64,
    pub best_f_large: f64,
    pub best_f_small: f64,
    pub best_overall: Option<BestOverall>,
}

impl Default for RegimeLedger {
    fn default() -> Self {
        Self {
            evals_large: 0,
            evals_small: 0,
            best_f_large: f64::INFINITY,
            best_f_small: f64::INFINITY,
            best_overall: None,
        }
    }
}

impl RegimeLedger {
    /// Books a finished run. On equal best values the earlier achiever keeps
    /// the incumbent.
    pub fn record(&mut self, arm: Arm, evals: u64, best_f: f64) {
        match arm {
            Arm::Large => {
                self.evals_large += evals;
                self.best_f_large = self.best_f_large.min(best_f);
            }
            Arm::Small => {
                self.evals_small += evals;
                self.best_f_small = self.best_f_small.min(best_f);
            }
        }
        let improves = match self.best_overall {
            None => !best_f.is_nan(),
            Some(b) => best_f < b.f,
        };
        if improves {
            self.best_overall = Some(BestOverall { f: best_f, arm });
        }
    }

    pub fn evals(&self, arm: Arm) -> u64 {
        match arm {
            Arm::Large => self.evals_large,
            Arm::Small => self.evals_small,
        }
    }

    pub fn total_evals(&self) -> u64 {
        self.evals_large + self.evals_small
    }
}

/// `λ = ⌊ρ_inc^i · λ_default⌋`, `σ⁰ = σ_default`.
pub fn ipop_next(i_restart: u32, policy: &RestartPolicy) -> HyperParams {
    HyperParams::new(
        large_lambda(i_restart, policy),
        policy.sigma_default,
        schedule_regime(i_restart),
    )
}

/// IPOP's λ with `σ⁰ = max(σ_default · ρ_σdec^{−i}, σ_floor)`.
pub fn nipop_next(i_restart: u32, policy: &RestartPolicy) -> HyperParams {
    let sigma = policy.sigma_default * policy.rho_sigma_dec.powf(-f64::from(i_restart));
    HyperParams::new(
        large_lambda(i_restart, policy),
        sigma.max(policy.sigma_floor),
        schedule_regime(i_restart),
    )
}

fn schedule_regime(i: u32) -> Regime {
    if i == 0 {
        Regime::Default
    } else {
        Regime::LargeSchedule
    }
}

fn large_lambda(i: u32, policy: &RestartPolicy) -> usize {
    let exp = i32::try_from(i).unwrap_or(i32::MAX);
    let lambda = (policy.lambda_default as f64 * policy.rho_inc.powi(exp)).floor();
    if lambda >= usize::MAX as f64 {
        usize::MAX
    } else {
        lambda as usize
    }
}

/// BIPOP's small regime for given uniforms:
/// `λ = ⌊λ_default·(½·λ_large/λ_default)^{u_λ²}⌋`, `σ⁰ = σ_default·10^{−2u_σ}`.
pub fn bipop_small_from_uniforms(
    policy: &RestartPolicy,
    lambda_large: usize,
    u_lambda: f64,
    u_sigma: f64,
) -> HyperParams {
    let base = policy.lambda_default as f64;
    let ratio = 0.5 * lambda_large as f64 / base;
    let upper = (lambda_large / 2).max(policy.lambda_default);
    let lambda = ((base * ratio.powf(u_lambda * u_lambda)).floor() as usize)
        .clamp(policy.lambda_default, upper);
    let sigma = policy.sigma_default * 10f64.powf(-2.0 * u_sigma);
    HyperParams::new(lambda, sigma, Regime::SmallRandom)
}

/// Draws BIPOP's small regime; the λ exponent is the square of a uniform.
pub fn bipop_draw_small(policy: &RestartPolicy, lambda_large: usize, rng: &mut Rng) -> HyperParams {
    let u_lambda: f64 = rng.random();
    let u_sigma: f64 = rng.random();
    bipop_small_from_uniforms(policy, lambda_large, u_lambda, u_sigma)
}

/// BIPOP picks the regime that has consumed fewer evaluations; ties go large.
pub fn bipop_select_regime(ledger: &RegimeLedger) -> Arm {
    if ledger.evals_large <= ledger.evals_small {
        Arm::Large
    } else {
        Arm::Small
    }
}

/// NBIPOP compares `evals_r / allowance(r)`, where the regime holding the best
/// solution so far has allowance `ρ_budget` and the other 1; ties go large.
pub fn nbipop_select_regime(ledger: &RegimeLedger, rho_budget: f64) -> Arm {
    let allowance = |arm: Arm| match ledger.best_overall {
        Some(b) if b.arm == arm => rho_budget,
        _ => 1.0,
    };
    let large = ledger.evals_large as f64 / allowance(Arm::Large);
    let small = ledger.evals_small as f64 / allowance(Arm::Small);
    if large <= small {
        Arm::Large
    } else {
        Arm::Small
    }
}

/// NBIPOP's small regime: `λ = λ_default`, `σ⁰ = σ_default·10^{−2u}`.
pub fn nbipop_small_from_uniform(policy: &RestartPolicy, u: f64) -> HyperParams {
    HyperParams::new(
        policy.lambda_default,
        policy.sigma_default * 10f64.powf(-2.0 * u),
        Regime::SmallRandom,
    )
}

pub fn nbipop_draw_small(policy: &RestartPolicy, rng: &mut Rng) -> HyperParams {
    let u: f64 = rng.random();
    nbipop_small_from_uniform(policy, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::restart::RestartKind;
    use crate::rng::seeded;

    fn policy(kind: RestartKind) -> RestartPolicy {
        RestartPolicy::new(kind, 10, 10.0)
    }

    #[test]
    fn ipop_schedule_doubles_lambda() {
        let p = policy(RestartKind::Ipop);
        let first = ipop_next(0, &p);
        assert_eq!((first.lambda, first.sigma0), (10, 2.0));
        assert_eq!(first.regime, Regime::Default);
        let third = ipop_next(3, &p);
        assert_eq!((third.lambda, third.sigma0), (80, 2.0));
        assert_eq!(ipop_next(5, &p).lambda, 320);
    }

    #[test]
    fn nipop_schedule_shrinks_sigma() {
        let p = policy(RestartKind::Nipop);
        assert_eq!(nipop_next(0, &p).sigma0, p.sigma_default);
        let h = nipop_next(3, &p);
        assert_eq!(h.lambda, 80);
        assert!((h.sigma0 - p.sigma_default / 4.096).abs() < 1e-15);
        let h9 = nipop_next(9, &p);
        assert_eq!(h9.lambda, 5120);
        assert!((p.sigma_default / h9.sigma0 - 68.719_476_736).abs() < 1e-9);
        assert!(h9.sigma0 > p.sigma_floor);
        // 1.6^10 > 100, so the floor takes over from restart 10 on
        assert_eq!(nipop_next(10, &p).sigma0, p.sigma_floor);
        assert_eq!(nipop_next(25, &p).sigma0, p.sigma_floor);
    }

    #[test]
    fn bipop_small_endpoints() {
        let p = policy(RestartKind::Bipop);
        let lo = bipop_small_from_uniforms(&p, 320, 0.0, 0.0);
        assert_eq!((lo.lambda, lo.sigma0), (p.lambda_default, p.sigma_default));
        let hi = bipop_small_from_uniforms(&p, 320, 1.0, 1.0);
        assert_eq!(hi.lambda, 160);
        assert!((hi.sigma0 - 1e-2 * p.sigma_default).abs() < 1e-16);
    }

    #[test]
    fn bipop_small_draws_stay_in_range() {
        let p = policy(RestartKind::Bipop);
        let mut rng = seeded(5);
        let large = 32 * p.lambda_default;
        for _ in 0..10_000 {
            let h = bipop_draw_small(&p, large, &mut rng);
            assert!((p.lambda_default..=16 * p.lambda_default).contains(&h.lambda));
            let r = h.sigma0 / p.sigma_default;
            assert!((1e-2..=1.0).contains(&r));
        }
    }

    #[test]
    fn bipop_prefers_the_cheaper_regime() {
        let mut l = RegimeLedger::default();
        assert_eq!(bipop_select_regime(&l), Arm::Large);
        l.evals_large = 100_000;
        l.evals_small = 30_000;
        assert_eq!(bipop_select_regime(&l), Arm::Small);
        l.evals_large = 20_000;
        l.evals_small = 90_000;
        assert_eq!(bipop_select_regime(&l), Arm::Large);
    }

    #[test]
    fn nbipop_doubles_the_leader_allowance() {
        let mut l = RegimeLedger {
            evals_large: 300_000,
            evals_small: 200_000,
            ..RegimeLedger::default()
        };
        // without a leader the rule reduces to BIPOP's
        assert_eq!(nbipop_select_regime(&l, 2.0), Arm::Small);
        l.best_overall = Some(BestOverall {
            f: 1.0,
            arm: Arm::Large,
        });
        // 3e5 / 2 = 1.5e5 < 2e5
        assert_eq!(nbipop_select_regime(&l, 2.0), Arm::Large);
        l.best_overall = Some(BestOverall {
            f: 1.0,
            arm: Arm::Small,
        });
        // 2e5 / 2 = 1e5 < 3e5
        assert_eq!(nbipop_select_regime(&l, 2.0), Arm::Small);
        assert_eq!(
            nbipop_select_regime(&RegimeLedger::default(), 2.0),
            Arm::Large
        );
    }

    #[test]
    fn nbipop_small_endpoints() {
        let p = policy(RestartKind::Nbipop);
        let a = nbipop_small_from_uniform(&p, 0.0);
        assert_eq!((a.lambda, a.sigma0), (p.lambda_default, p.sigma_default));
        let b = nbipop_small_from_uniform(&p, 1.0);
        assert_eq!(b.lambda, p.lambda_default);
        assert!((b.sigma0 - 1e-2 * p.sigma_default).abs() < 1e-16);
    }

    #[test]
    fn ledger_keeps_earliest_best_on_ties() {
        let mut l = RegimeLedger::default();
        l.record(Arm::Large, 100, 3.0);
        l.record(Arm::Small, 50, 3.0);
        assert_eq!(l.best_overall.unwrap().arm, Arm::Large);
        l.record(Arm::Small, 50, 2.0);
        assert_eq!(l.best_overall.unwrap().arm, Arm::Small);
        assert_eq!((l.evals_large, l.evals_small), (100, 100));
        assert_eq!((l.best_f_large, l.best_f_small), (3.0, 2.0));
    }
}
