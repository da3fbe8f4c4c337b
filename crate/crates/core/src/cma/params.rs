use serde::{Deserialize, Serialize};

use crate::error::CmaError;

/// Default population size `4 + ⌊3 ln D⌋`.
pub fn default_lambda(dim: usize) -> usize {
    4 + (3.0 * (dim as f64).ln()).floor() as usize
}

/// Strategy constants of weighted active (μ/μ_w,λ)-CMA-ES.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CmaParams {
    pub dim: usize,
    pub lambda: usize,
    pub mu: usize,
    /// Positive recombination weights, decreasing, summing to one.
    pub weights: Vec<f64>,
    /// Variance-effective selection mass `1 / Σ w_i²`.
    pub mu_eff: f64,
    pub c_sigma: f64,
    pub d_sigma: f64,
    pub c_c: f64,
    pub c_1: f64,
    pub c_mu: f64,
    /// Learning rate of the negative (active) covariance term.
    pub c_minus: f64,
    /// Share of the active learning rate that is taken from the old covariance.
    pub alpha_old: f64,
    pub active: bool,
    /// Approximation of E‖N(0, I)‖.
    pub chi_n: f64,
}

impl CmaParams {
    /// Default constants for the given dimension and population size.
    ///
    /// Weights follow `w_i ∝ ln(μ + ½) − ln i`; step-size and covariance rates are
    /// the usual CMA-ES defaults, with the active rate
    /// `c⁻ = (1 − c_μ)·¼·μ_eff / ((D + 2)^1.5 + 2μ_eff)` and `α⁻_old = ½`.
    pub fn new(dim: usize, lambda: usize, active: bool) -> Result<Self, CmaError> {
        if dim == 0 {
            return Err(CmaError::InvalidArgument("dim must be at least 1".into()));
        }
        if lambda < 2 {
            return Err(CmaError::InvalidArgument(format!(
                "lambda must be at least 2, got {lambda}"
            )));
        }
        let n = dim as f64;
        let mu = lambda / 2;
        let raw: Vec<f64> = (1..=mu)
            .map(|i| (mu as f64 + 0.5).ln() - (i as f64).ln())
            .collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let mu_eff = 1.0 / weights.iter().map(|w| w * w).sum::<f64>();

        let c_sigma = (mu_eff + 2.0) / (n + mu_eff + 5.0);
        let d_sigma = 1.0 + 2.0 * (((mu_eff - 1.0) / (n + 1.0)).sqrt() - 1.0).max(0.0) + c_sigma;
        let c_c = (4.0 + mu_eff / n) / (n + 4.0 + 2.0 * mu_eff / n);
        let c_1 = 2.0 / ((n + 1.3).powi(2) + mu_eff);
        let c_mu = (1.0 - c_1)
            .min(2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((n + 2.0).powi(2) + mu_eff))
            .max(0.0);
        let alpha_old = 0.5;
        // c_1 + c_mu <= 1, so any c_minus >= 0 satisfies c_1 + c_mu - c_minus * alpha_old <= 1.
        let c_minus = if active {
            (1.0 - c_mu) * 0.25 * mu_eff / ((n + 2.0).powf(1.5) + 2.0 * mu_eff)
        } else {
            0.0
        };
        let chi_n = n.sqrt() * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

        Ok(Self {
            dim,
            lambda,
            mu,
            weights,
            mu_eff,
            c_sigma,
            d_sigma,
            c_c,
            c_1,
            c_mu,
            c_minus,
            alpha_old,
            active,
            chi_n,
        })
    }

    /// Defaults with `λ = 4 + ⌊3 ln D⌋`.
    pub fn with_default_lambda(dim: usize, active: bool) -> Result<Self, CmaError> {
        Self::new(dim, default_lambda(dim), active)
    }

    /// Generations between eigendecompositions, `⌈1 / (10 D (c_1 + c_μ))⌉`.
    pub fn eigen_lag(&self) -> u64 {
        let rate = self.c_1 + self.c_mu;
        if rate <= 0.0 {
            return 1;
        }
        (1.0 / (10.0 * self.dim as f64 * rate)).ceil().max(1.0) as u64
    }

    /// Checks the structural invariants.
    pub fn validate(&self) -> Result<(), CmaError> {
        let bad = |msg: String| Err(CmaError::InvalidArgument(msg));
        if self.weights.len() != self.mu || self.mu == 0 {
            return bad(format!("expected {} weights, got {}", self.mu, self.weights.len()));
        }
        if self.weights.iter().any(|&w| w <= 0.0) {
            return bad("weights must be positive".into());
        }
        if self.weights.windows(2).any(|p| p[0] < p[1]) {
            return bad("weights must be non-increasing".into());
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return bad(format!("weights sum to {sum}"));
        }
        for (name, rate) in [
            ("c_sigma", self.c_sigma),
            ("c_c", self.c_c),
            ("c_1", self.c_1),
            ("c_mu", self.c_mu),
            ("c_minus", self.c_minus),
            ("alpha_old", self.alpha_old),
        ] {
            if !(0.0..=1.0).contains(&rate) {
                return bad(format!("{name} = {rate} outside [0, 1]"));
            }
        }
        if self.d_sigma < 1.0 {
            return bad(format!("d_sigma = {} < 1", self.d_sigma));
        }
        if self.c_1 + self.c_mu - self.c_minus * self.alpha_old > 1.0 {
            return bad("c_1 + c_mu - c_minus * alpha_old exceeds 1".into());
        }
        Ok(())
    }
}
