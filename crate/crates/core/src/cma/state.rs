use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use super::params::CmaParams;
use crate::error::CmaError;

/// Relative lower bound on eigenvalues after repair.
pub const EIGEN_FLOOR: f64 = 1e-20;

/// A sampled point before evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub x: DVector<f64>,
    /// `(x − m) / σ`.
    pub z_step: DVector<f64>,
}

/// An evaluated offspring.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub x: DVector<f64>,
    pub z_step: DVector<f64>,
    pub f: f64,
}

impl Candidate {
    pub fn new(sample: Sample, f: f64) -> Result<Self, CmaError> {
        if !f.is_finite() {
            return Err(CmaError::Numerical(format!("objective returned {f}")));
        }
        Ok(Self {
            x: sample.x,
            z_step: sample.z_step,
            f,
        })
    }
}

/// Sorts candidates ascending by objective value. Ties keep sampling order.
pub fn rank(mut candidates: Vec<Candidate>) -> Vec<Candidate> {
    candidates.sort_by(|a, b| a.f.total_cmp(&b.f));
    candidates
}

fn check_sorted(ranked: &[Candidate], upto: usize) -> Result<(), CmaError> {
    let upto = upto.min(ranked.len());
    for i in 1..upto {
        if ranked[i - 1].f > ranked[i].f {
            return Err(CmaError::Unsorted {
                index: i - 1,
                current: ranked[i - 1].f,
                next_index: i,
                next: ranked[i].f,
            });
        }
    }
    Ok(())
}

/// Outcome of [`CmaState::repair_covariance`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Repair {
    /// Number of eigenvalues raised to the floor.
    pub clamped: usize,
}

/// The evolving search distribution of one CMA-ES run.
#[derive(Clone, Debug, PartialEq)]
pub struct CmaState {
    pub mean: DVector<f64>,
    pub sigma: f64,
    pub sigma0: f64,
    pub cov: DMatrix<f64>,
    pub p_sigma: DVector<f64>,
    pub p_c: DVector<f64>,
    pub eigen_basis: DMatrix<f64>,
    pub eigen_values: DVector<f64>,
    pub generation: u64,
    pub evals: u64,
    pub best_f: f64,
    pub best_x: Option<DVector<f64>>,
    /// Generation at which the eigensystem was last computed.
    pub eigen_generation: u64,
    /// `B · diag(√d)`.
    scaled_basis: DMatrix<f64>,
    /// `B · diag(1/√d) · Bᵀ`.
    inv_sqrt: DMatrix<f64>,
    pub(crate) best_history: Vec<f64>,
    pub(crate) median_history: Vec<f64>,
    /// max − min of the latest generation's objective values.
    pub(crate) last_range: f64,
}

impl CmaState {
    /// Fresh state with `C = I` and zero evolution paths.
    pub fn new(mean: DVector<f64>, sigma0: f64) -> Result<Self, CmaError> {
        let dim = mean.len();
        if dim == 0 {
            return Err(CmaError::InvalidArgument("empty mean".into()));
        }
        if !(sigma0 > 0.0 && sigma0.is_finite()) {
            return Err(CmaError::InvalidArgument(format!("sigma0 = {sigma0}")));
        }
        if mean.iter().any(|v| !v.is_finite()) {
            return Err(CmaError::InvalidArgument("non-finite mean".into()));
        }
        Ok(Self {
            mean,
            sigma: sigma0,
            sigma0,
            cov: DMatrix::identity(dim, dim),
            p_sigma: DVector::zeros(dim),
            p_c: DVector::zeros(dim),
            eigen_basis: DMatrix::identity(dim, dim),
            eigen_values: DVector::from_element(dim, 1.0),
            generation: 0,
            evals: 0,
            best_f: f64::INFINITY,
            best_x: None,
            eigen_generation: 0,
            scaled_basis: DMatrix::identity(dim, dim),
            inv_sqrt: DMatrix::identity(dim, dim),
            best_history: Vec::new(),
            median_history: Vec::new(),
            last_range: f64::INFINITY,
        })
    }

    /// State with an arbitrary covariance, decomposed and repaired immediately.
    pub fn with_covariance(
        mean: DVector<f64>,
        sigma0: f64,
        cov: DMatrix<f64>,
    ) -> Result<Self, CmaError> {
        let mut state = Self::new(mean, sigma0)?;
        if cov.shape() != state.cov.shape() {
            return Err(CmaError::InvalidArgument(format!(
                "covariance shape {:?} does not match dimension {}",
                cov.shape(),
                state.dim()
            )));
        }
        state.cov = cov;
        state.repair_covariance()?;
        Ok(state)
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    fn check_fresh(&self, params: &CmaParams) -> Result<(), CmaError> {
        let age = self.generation.saturating_sub(self.eigen_generation);
        let lag = params.eigen_lag();
        if age > lag {
            return Err(CmaError::StaleEigensystem { age, lag });
        }
        Ok(())
    }

    /// Draws λ points `x_k = m + σ·B·diag(√d)·z_k`, `z_k ~ N(0, I)`.
    pub fn sample_population<R: Rng + ?Sized>(
        &self,
        params: &CmaParams,
        rng: &mut R,
    ) -> Result<Vec<Sample>, CmaError> {
        self.check_fresh(params)?;
        let dim = self.dim();
        let samples = (0..params.lambda)
            .map(|_| {
                let z = DVector::from_iterator(dim, (0..dim).map(|_| rng.sample(StandardNormal)));
                let z_step = &self.scaled_basis * z;
                let x = &self.mean + &z_step * self.sigma;
                Sample { x, z_step }
            })
            .collect();
        Ok(samples)
    }

    /// Recombines the best μ candidates into the new mean and returns it.
    pub fn update_mean(
        &mut self,
        ranked: &[Candidate],
        params: &CmaParams,
    ) -> Result<DVector<f64>, CmaError> {
        if ranked.len() < params.mu {
            return Err(CmaError::InvalidArgument(format!(
                "need at least {} ranked candidates, got {}",
                params.mu,
                ranked.len()
            )));
        }
        check_sorted(ranked, params.mu)?;
        let mut mean = DVector::zeros(self.dim());
        for (w, c) in params.weights.iter().zip(ranked) {
            mean.axpy(*w, &c.x, 1.0);
        }
        if ranked[0].f < self.best_f {
            self.best_f = ranked[0].f;
            self.best_x = Some(ranked[0].x.clone());
        }
        self.mean = mean.clone();
        Ok(mean)
    }

    /// Appends the generation's best and median values to the stall histories.
    pub fn record_generation(&mut self, ranked: &[Candidate]) {
        if ranked.is_empty() {
            return;
        }
        let n = ranked.len();
        let median = if n % 2 == 1 {
            ranked[n / 2].f
        } else {
            0.5 * (ranked[n / 2 - 1].f + ranked[n / 2].f)
        };
        self.best_history.push(ranked[0].f);
        self.median_history.push(median);
        self.last_range = ranked[n - 1].f - ranked[0].f;
    }

    /// `C^{-1/2}` from the current eigensystem.
    pub fn inv_sqrt_cov(&self) -> Result<&DMatrix<f64>, CmaError> {
        let min = self.eigen_values.min();
        if !(min > 0.0) {
            return Err(CmaError::NotRepaired(min));
        }
        Ok(&self.inv_sqrt)
    }

    /// Cumulative step-size adaptation and the rank-one evolution path.
    ///
    /// `mean_shift` is `(m′ − m) / σ`.
    pub fn update_paths_and_sigma(
        &mut self,
        params: &CmaParams,
        mean_shift: &DVector<f64>,
    ) -> Result<(), CmaError> {
        let cs = params.c_sigma;
        let whitened = self.inv_sqrt_cov()? * mean_shift;
        self.p_sigma *= 1.0 - cs;
        self.p_sigma
            .axpy((cs * (2.0 - cs) * params.mu_eff).sqrt(), &whitened, 1.0);

        let norm = self.p_sigma.norm();
        let n = params.dim as f64;
        let decay = 1.0 - (1.0 - cs).powf(2.0 * (self.generation as f64 + 1.0));
        let h_sigma = norm / decay.sqrt() < (1.4 + 2.0 / (n + 1.0)) * params.chi_n;

        let cc = params.c_c;
        self.p_c *= 1.0 - cc;
        if h_sigma {
            self.p_c
                .axpy((cc * (2.0 - cc) * params.mu_eff).sqrt(), mean_shift, 1.0);
        }

        let sigma = self.sigma * ((cs / params.d_sigma) * (norm / params.chi_n - 1.0)).exp();
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(CmaError::Numerical(format!("step size became {sigma}")));
        }
        self.sigma = sigma;
        Ok(())
    }

    /// Rank-one, rank-μ and (when active) negative rank-μ covariance update.
    ///
    /// `C ← (1 − c₁ − c_μ + c⁻α⁻_old)·C + c₁·p_c p_cᵀ + (c_μ + c⁻(1 − α⁻_old))·C⁺_μ − c⁻·C⁻_μ`
    ///
    /// `C⁺_μ` is the weighted scatter of the best μ steps. `C⁻_μ` weights the
    /// worst μ steps with `w_1..w_μ` starting from the very worst, each step
    /// rescaled in the `C^{-1/2}` metric to the length of its mirror-ranked
    /// counterpart. `p_c` must already hold the new evolution path.
    pub fn update_covariance(
        &mut self,
        ranked: &[Candidate],
        params: &CmaParams,
    ) -> Result<(), CmaError> {
        let lambda = ranked.len();
        let mu = params.mu;
        if lambda < 2 * mu || mu == 0 {
            return Err(CmaError::InvalidArgument(format!(
                "need at least {} ranked candidates, got {lambda}",
                2 * mu
            )));
        }
        check_sorted(ranked, lambda)?;
        let dim = self.dim();

        let mut best = DMatrix::zeros(dim, mu);
        for (i, c) in ranked.iter().take(mu).enumerate() {
            best.set_column(i, &(&c.z_step * params.weights[i].sqrt()));
        }
        let c_plus = &best * best.transpose();

        let c1 = params.c_1;
        let cmu = params.c_mu;
        let mut next;
        if params.active {
            let cminus = params.c_minus;
            let alpha = params.alpha_old;
            let inv_sqrt = self.inv_sqrt_cov()?;
            let mut worst = DMatrix::zeros(dim, mu);
            for i in 0..mu {
                let step = &ranked[lambda - 1 - i].z_step;
                let mirror = &ranked[lambda - mu + i].z_step;
                let denom = (inv_sqrt * step).norm();
                let scale = if denom > 0.0 {
                    (inv_sqrt * mirror).norm() / denom
                } else {
                    0.0
                };
                worst.set_column(i, &(step * (scale * params.weights[i].sqrt())));
            }
            let c_minus = &worst * worst.transpose();
            next = &self.cov * (1.0 - c1 - cmu + cminus * alpha);
            next.ger(c1, &self.p_c, &self.p_c, 1.0);
            next += c_plus * (cmu + cminus * (1.0 - alpha));
            next -= c_minus * cminus;
        } else {
            next = &self.cov * (1.0 - c1 - cmu);
            next.ger(c1, &self.p_c, &self.p_c, 1.0);
            next += c_plus * cmu;
        }
        self.cov = symmetrize(next);
        Ok(())
    }

    /// Recomputes `C = B·diag(d)·Bᵀ`, raising eigenvalues below
    /// `EIGEN_FLOOR · max(d)` to that floor.
    pub fn repair_covariance(&mut self) -> Result<Repair, CmaError> {
        if self.cov.iter().any(|v| !v.is_finite()) {
            return Err(CmaError::Numerical("non-finite covariance entry".into()));
        }
        let eig = SymmetricEigen::try_new(self.cov.clone(), f64::EPSILON, 0)
            .ok_or_else(|| CmaError::Numerical("eigendecomposition did not converge".into()))?;
        let mut values = eig.eigenvalues;
        let basis = eig.eigenvectors;
        let max = values.max();
        if !(max > 0.0 && max.is_finite()) {
            return Err(CmaError::Numerical(format!("largest eigenvalue is {max}")));
        }
        let floor = EIGEN_FLOOR * max;
        let mut clamped = 0;
        for v in values.iter_mut() {
            if *v < floor {
                *v = floor;
                clamped += 1;
            }
        }
        if clamped > 0 {
            let scaled = &basis * DMatrix::from_diagonal(&values);
            self.cov = symmetrize(scaled * basis.transpose());
        }
        let sqrt = values.map(f64::sqrt);
        self.scaled_basis = &basis * DMatrix::from_diagonal(&sqrt);
        let inv = sqrt.map(|s| 1.0 / s);
        self.inv_sqrt = symmetrize(&basis * DMatrix::from_diagonal(&inv) * basis.transpose());
        self.eigen_basis = basis;
        self.eigen_values = values;
        self.eigen_generation = self.generation;
        Ok(Repair { clamped })
    }

    /// Refreshes the eigensystem when it is `lag` generations old.
    pub fn maybe_refresh_eigen(&mut self, params: &CmaParams) -> Result<Option<Repair>, CmaError> {
        if self.generation - self.eigen_generation >= params.eigen_lag() {
            self.repair_covariance().map(Some)
        } else {
            Ok(None)
        }
    }

    /// Condition number of C from the current eigensystem.
    pub fn condition(&self) -> f64 {
        self.eigen_values.max() / self.eigen_values.min()
    }
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    let t = m.transpose();
    (m + t) * 0.5
}
