#![allow(dead_code, clippy::needless_range_loop)]

use nalgebra::{DMatrix, DVector};
use restart_cma::cma::{rank, Candidate, CmaParams, CmaState};
use restart_cma::make_function;
use restart_cma::rng::seeded;

/// One generation captured just before the covariance update.
pub struct Fixture {
    pub params: CmaParams,
    pub before: CmaState,
    pub after: DMatrix<f64>,
    pub ranked: Vec<Candidate>,
}

fn step(
    state: &mut CmaState,
    params: &CmaParams,
    f: &dyn Fn(&[f64]) -> f64,
    rng: &mut restart_cma::Rng,
) -> Vec<Candidate> {
    let samples = state.sample_population(params, rng).unwrap();
    let candidates = samples
        .into_iter()
        .map(|s| {
            let v = f(s.x.as_slice());
            Candidate::new(s, v).unwrap()
        })
        .collect();
    let ranked = rank(candidates);
    let old_mean = state.mean.clone();
    let new_mean = state.update_mean(&ranked, params).unwrap();
    state.record_generation(&ranked);
    let shift = (new_mean - old_mean) / state.sigma;
    state.update_paths_and_sigma(params, &shift).unwrap();
    ranked
}

/// Evolves a state on a rotated ellipsoid for a seed-dependent number of
/// generations, refreshes its eigensystem and stops right before the
/// covariance update of the next generation.
pub fn fixture(dim: usize, seed: u64) -> Fixture {
    fixture_with_lambda(dim, restart_cma::default_lambda(dim), seed)
}

pub fn fixture_with_lambda(dim: usize, lambda: usize, seed: u64) -> Fixture {
    let params = CmaParams::new(dim, lambda, true).unwrap();
    let objective = make_function("ellipsoid_rotated", dim, seed % 7 + 1).unwrap();
    let f = |x: &[f64]| objective.eval(x);
    let mut rng = seeded(seed);
    let m0 = objective.bounds().sample_uniform(&mut rng);
    let mut state = CmaState::new(DVector::from_vec(m0), 2.0).unwrap();
    for _ in 0..seed % 25 {
        let ranked = step(&mut state, &params, &f, &mut rng);
        state.update_covariance(&ranked, &params).unwrap();
        state.generation += 1;
        state.maybe_refresh_eigen(&params).unwrap();
    }
    state.repair_covariance().unwrap();
    let ranked = step(&mut state, &params, &f, &mut rng);
    let before = state.clone();
    state.update_covariance(&ranked, &params).unwrap();
    Fixture {
        params,
        before,
        after: state.cov,
        ranked,
    }
}

/// `yᵀ C⁻¹ y` through a Cholesky solve.
fn mahalanobis_sq(chol: &nalgebra::Cholesky<f64, nalgebra::Dyn>, y: &DVector<f64>) -> f64 {
    y.dot(&chol.solve(y))
}

/// Term-by-term assembly of the weighted active covariance update:
///
/// `C′ = (1 − c₁ − c_μ + c⁻α⁻_old)C + c₁ p_c p_cᵀ + (c_μ + c⁻(1 − α⁻_old))C⁺_μ − c⁻C⁻_μ`
///
/// with `C⁺_μ = Σ_{i<μ} w_{i+1} y_{i+1:λ} y_{i+1:λ}ᵀ` and
/// `C⁻_μ = Σ_{i<μ} w_{i+1} ỹ_{λ−i:λ} ỹ_{λ−i:λ}ᵀ`, where
/// `ỹ_{λ−i:λ} = ‖C^{-1/2} y_{λ−μ+1+i:λ}‖ / ‖C^{-1/2} y_{λ−i:λ}‖ · y_{λ−i:λ}`.
pub fn eq2_oracle(
    cov: &DMatrix<f64>,
    p_c: &DVector<f64>,
    ranked: &[Candidate],
    params: &CmaParams,
) -> DMatrix<f64> {
    let n = cov.nrows();
    let lambda = ranked.len();
    let mu = params.mu;
    let chol = nalgebra::Cholesky::new(cov.clone()).expect("positive definite");

    let mut c_plus = DMatrix::<f64>::zeros(n, n);
    for i in 0..mu {
        let y = &ranked[i].z_step;
        for r in 0..n {
            for c in 0..n {
                c_plus[(r, c)] += params.weights[i] * y[r] * y[c];
            }
        }
    }

    let mut c_minus = DMatrix::<f64>::zeros(n, n);
    for i in 0..mu {
        let worst = &ranked[lambda - 1 - i].z_step;
        let mirror = &ranked[lambda - mu + i].z_step;
        let ratio = (mahalanobis_sq(&chol, mirror) / mahalanobis_sq(&chol, worst)).sqrt();
        for r in 0..n {
            for c in 0..n {
                c_minus[(r, c)] += params.weights[i] * ratio * ratio * worst[r] * worst[c];
            }
        }
    }

    let (c1, cmu, cm, a) = (params.c_1, params.c_mu, params.c_minus, params.alpha_old);
    let mut out = DMatrix::<f64>::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            out[(r, c)] = (1.0 - c1 - cmu + cm * a) * cov[(r, c)]
                + c1 * p_c[r] * p_c[c]
                + (cmu + cm * (1.0 - a)) * c_plus[(r, c)]
                - cm * c_minus[(r, c)];
        }
    }
    let t = out.transpose();
    (out + t) * 0.5
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
