mod common;

use common::{eq2_oracle, fixture, fixture_with_lambda, max_abs_diff};
use proptest::prelude::*;

#[test]
fn d3_lambda6_single_generation_matches_oracle() {
    let fx = fixture_with_lambda(3, 6, 0);
    assert_eq!(fx.params.mu, 3);
    assert!(fx.params.c_minus > 0.0);
    let oracle = eq2_oracle(&fx.before.cov, &fx.before.p_c, &fx.ranked, &fx.params);
    assert!(max_abs_diff(&oracle, &fx.after) <= 1e-12);
}

#[test]
fn update_is_symmetric_and_positive_definite() {
    for seed in 0..30 {
        let fx = fixture(5, seed);
        assert_eq!(fx.after, fx.after.transpose());
        assert!(nalgebra::Cholesky::new(fx.after.clone()).is_some(), "seed {seed}");
    }
}

#[test]
fn inactive_update_matches_oracle_with_zero_minus_rate() {
    let mut fx = fixture(4, 3);
    fx.params = restart_cma::CmaParams::new(4, fx.params.lambda, false).unwrap();
    let mut state = fx.before.clone();
    state.update_covariance(&fx.ranked, &fx.params).unwrap();
    let oracle = eq2_oracle(&fx.before.cov, &fx.before.p_c, &fx.ranked, &fx.params);
    assert!(max_abs_diff(&oracle, &state.cov) <= 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fast_update_equals_term_by_term_assembly(dim in 2usize..=5, seed in any::<u64>()) {
        let fx = fixture(dim, seed);
        let oracle = eq2_oracle(&fx.before.cov, &fx.before.p_c, &fx.ranked, &fx.params);
        prop_assert!(max_abs_diff(&oracle, &fx.after) <= 1e-12);
    }

    #[test]
    fn weights_sum_to_one_and_decrease(dim in 2usize..60, extra in 0usize..40) {
        let lambda = restart_cma::default_lambda(dim) + extra;
        let p = restart_cma::CmaParams::new(dim, lambda, true).unwrap();
        let sum: f64 = p.weights.iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
        prop_assert!(p.weights.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(p.c_1 + p.c_mu - p.c_minus * p.alpha_old <= 1.0);
        prop_assert!(p.validate().is_ok());
    }
}
