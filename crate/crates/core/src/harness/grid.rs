//! Landscape scans of the (λ, σ⁰) hyper-parameter space.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::float::format_float;
use super::metrics::median;
use crate::cma::run_single;
use crate::error::{ConfigError, ReportError};
use crate::objectives::ObjectiveInstance;
use crate::restart::{HyperParams, Regime, RestartKind, RestartPolicy};
use crate::rng::{derive_seed, seeded};

/// Precision at which a grid cell counts as solved.
pub const GRID_PRECISION: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellOutcome {
    Always,
    Sometimes,
    Never,
}

impl CellOutcome {
    pub fn from_counts(successes: usize, trials: usize) -> Self {
        if successes == 0 {
            Self::Never
        } else if successes == trials {
            Self::Always
        } else {
            Self::Sometimes
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Self::Always => '+',
            Self::Sometimes => '*',
            Self::Never => 'o',
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Always => "always",
            Self::Sometimes => "sometimes",
            Self::Never => "never",
        }
    }
}

/// Axes of a scan: λ as `2^k·λ_default`, σ⁰ as `10^v·σ_default`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lambda_exponents: Vec<u32>,
    pub sigma_log10: Vec<f64>,
    pub trials: usize,
    pub budget: u64,
    pub base_seed: u64,
}

impl GridSpec {
    /// λ ∈ {2⁰..2⁹}·λ_default and ten log-spaced σ⁰ ∈ [10⁻², 10⁰]·σ_default.
    pub fn new(trials: usize, budget: u64) -> Self {
        Self {
            lambda_exponents: (0..10).collect(),
            sigma_log10: (0..10).map(|i| -2.0 + 2.0 * i as f64 / 9.0).collect(),
            trials,
            budget,
            base_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        if self.lambda_exponents.is_empty() || self.sigma_log10.is_empty() {
            return bad("grids must be non-empty");
        }
        if self.lambda_exponents.windows(2).any(|w| w[0] >= w[1]) {
            return bad("lambda grid must be strictly increasing");
        }
        if self.sigma_log10.windows(2).any(|w| !(w[0] < w[1])) {
            return bad("sigma grid must be strictly increasing");
        }
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub lambda_exponent: u32,
    pub lambda: usize,
    pub sigma_log10: f64,
    pub sigma0: f64,
    /// Best value of every trial, in trial order.
    pub best_f: Vec<f64>,
    pub median_best_f: f64,
    pub successes: usize,
    pub trials: usize,
    pub outcome: CellOutcome,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub function: String,
    pub dim: usize,
    pub f_opt: f64,
    pub lambda_default: usize,
    pub sigma_default: f64,
    pub precision: f64,
    pub spec: GridSpec,
    /// Row-major: λ outer, σ inner.
    pub cells: Vec<GridCell>,
}

impl GridReport {
    pub fn cell(&self, lambda_exponent: u32, sigma_log10: f64) -> Option<&GridCell> {
        self.cells
            .iter()
            .find(|c| c.lambda_exponent == lambda_exponent && c.sigma_log10 == sigma_log10)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "lambda_exponent,lambda,sigma_log10,sigma0,median_best_f,successes,trials,outcome\n",
        );
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                c.lambda_exponent,
                c.lambda,
                c.sigma_log10,
                c.sigma0,
                format_float(c.median_best_f),
                c.successes,
                c.trials,
                c.outcome.as_str()
            );
        }
        out
    }

    /// σ⁰ down the rows (largest first), λ across; `+` always, `*` sometimes,
    /// `o` never solved.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} D={}  median best f - f_opt  [+ always, * sometimes, o never at {:e}]",
            self.function, self.dim, self.precision
        );
        let _ = write!(out, "{:>10}", "s/s_def");
        for k in &self.spec.lambda_exponents {
            let _ = write!(out, " {:>11}", format!("{}x", 1u64 << k));
        }
        out.push('\n');
        for s in self.spec.sigma_log10.iter().rev() {
            let _ = write!(out, "{:>10.3e}", 10f64.powf(*s));
            for k in &self.spec.lambda_exponents {
                let c = self.cell(*k, *s).expect("full grid");
                let _ = write!(
                    out,
                    " {:>9.2e} {}",
                    c.median_best_f - self.f_opt,
                    c.outcome.symbol()
                );
            }
            out.push('\n');
        }
        out
    }

    pub fn emit(&self, dir: &Path) -> Result<(PathBuf, PathBuf), ReportError> {
        std::fs::create_dir_all(dir).map_err(|e| ReportError::io(dir, e))?;
        let csv = dir.join("grid.csv");
        std::fs::write(&csv, self.to_csv()).map_err(|e| ReportError::io(&csv, e))?;
        let json = dir.join("grid.json");
        let mut text = serde_json::to_string_pretty(self).map_err(|source| ReportError::Json {
            path: json.clone(),
            source,
        })?;
        text.push('\n');
        std::fs::write(&json, text).map_err(|e| ReportError::io(&json, e))?;
        Ok((csv, json))
    }
}

/// Runs `spec.trials` independent CMA-ES runs per (λ, σ⁰) cell with a fixed
/// budget, each from a uniform start in the box, and records the median best
/// value and how often `f_opt + 10⁻¹⁰` was reached.
pub fn grid_scan(objective: &ObjectiveInstance, spec: &GridSpec) -> Result<GridReport, ConfigError> {
    spec.validate()?;
    let f_opt = objective.f_opt().ok_or_else(|| {
        ConfigError::Invalid(format!("`{}` has no known optimum", objective.name()))
    })?;
    let base = RestartPolicy::for_objective(RestartKind::Ipop, objective);
    let target = f_opt + GRID_PRECISION;

    let mut jobs = Vec::new();
    for (i, &k) in spec.lambda_exponents.iter().enumerate() {
        for (j, &s) in spec.sigma_log10.iter().enumerate() {
            for t in 0..spec.trials {
                jobs.push((i, j, k, s, t));
            }
        }
    }
    let results: Vec<f64> = jobs
        .par_iter()
        .map(|&(i, j, k, s, t)| {
            let hyper = HyperParams::new(
                base.lambda_default << k,
                base.sigma_default * 10f64.powf(s),
                Regime::LargeSchedule,
            );
            let mut rng = seeded(derive_seed(spec.base_seed, &[i as u64, j as u64, t as u64]));
            let m0 = objective.bounds().sample_uniform(&mut rng);
            let budget = spec.budget.max(hyper.lambda as u64);
            run_single(objective, &hyper, &m0, budget, Some(target), &mut rng)
                .map_or(f64::INFINITY, |r| r.best_f)
        })
        .collect();

    let cells = results
        .chunks(spec.trials)
        .zip(jobs.chunks(spec.trials))
        .map(|(best_f, job)| {
            let (_, _, k, s, _) = job[0];
            let successes = best_f.iter().filter(|f| **f <= target).count();
            GridCell {
                lambda_exponent: k,
                lambda: base.lambda_default << k,
                sigma_log10: s,
                sigma0: base.sigma_default * 10f64.powf(s),
                best_f: best_f.to_vec(),
                median_best_f: median(best_f),
                successes,
                trials: spec.trials,
                outcome: CellOutcome::from_counts(successes, spec.trials),
            }
        })
        .collect();

    Ok(GridReport {
        function: objective.name().to_string(),
        dim: objective.dim(),
        f_opt,
        lambda_default: base.lambda_default,
        sigma_default: base.sigma_default,
        precision: GRID_PRECISION,
        spec: spec.clone(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_axes_span_the_figure_ranges() {
        let spec = GridSpec::new(15, 1000);
        assert_eq!(spec.lambda_exponents.len(), 10);
        assert_eq!(spec.sigma_log10.len(), 10);
        assert_eq!(spec.sigma_log10[0], -2.0);
        assert!((spec.sigma_log10[9] - 0.0).abs() < 1e-15);
        spec.validate().unwrap();
    }

    #[test]
    fn outcome_tri_state() {
        assert_eq!(CellOutcome::from_counts(0, 15), CellOutcome::Never);
        assert_eq!(CellOutcome::from_counts(3, 15), CellOutcome::Sometimes);
        assert_eq!(CellOutcome::from_counts(15, 15), CellOutcome::Always);
    }

    #[test]
    fn non_increasing_axes_are_rejected() {
        let mut spec = GridSpec::new(1, 100);
        spec.lambda_exponents = vec![0, 0];
        assert!(spec.validate().is_err());
        let mut spec = GridSpec::new(1, 100);
        spec.sigma_log10 = vec![0.0, -1.0];
        assert!(spec.validate().is_err());
    }
}
