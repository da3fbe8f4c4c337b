use proptest::prelude::*;
use restart_cma::objectives::{
    function_names, make_instance, negate, normalize_domain, Instancing, Shift,
};
use restart_cma::rng::seeded;
use restart_cma::{make_function, Bounds, ObjectiveInstance, PenaltyWrapper};

const TRANSLATED: &[&str] = &[
    "sphere",
    "rosenbrock",
    "rastrigin",
    "buche_rastrigin",
    "rastrigin_rotated",
    "weierstrass",
    "schaffers_f7",
    "schaffers_f7_ill",
    "griewank_rosenbrock",
    "schwefel",
    "katsuura",
    "ellipsoid_rotated",
];

#[test]
fn every_function_attains_its_optimum_and_nothing_beats_it() {
    for name in function_names() {
        for dim in [2, 5, 10] {
            let obj = make_function(name, dim, 3).unwrap();
            let f_opt = obj.f_opt().unwrap();
            let x_opt = obj.x_opt().unwrap();
            assert!(
                (obj.eval(x_opt) - f_opt).abs() <= 1e-9,
                "{name} D={dim}: f(x_opt) = {}",
                obj.eval(x_opt)
            );
            let mut rng = seeded(dim as u64);
            for _ in 0..1000 {
                let x = obj.bounds().sample_uniform(&mut rng);
                assert!(obj.eval(&x) >= f_opt, "{name} D={dim} at {x:?}");
            }
        }
    }
}

#[test]
fn zero_shift_rastrigin_is_zero_at_origin() {
    let inst = Instancing {
        shift: Shift::Zero,
        rotation_seed: 4,
    };
    let obj = make_instance("rastrigin", 7, 0, &inst).unwrap();
    assert_eq!(obj.x_opt().unwrap(), &[0.0; 7][..]);
    assert_eq!(obj.eval(&[0.0; 7]), 0.0);
}

#[test]
fn sphere_at_unit_offset_from_optimum() {
    for seed in 0..5 {
        let obj = make_function("sphere", 5, seed).unwrap();
        let mut x = obj.x_opt().unwrap().to_vec();
        x[2] += 1.0;
        assert!((obj.eval(&x) - (obj.f_opt().unwrap() + 1.0)).abs() < 1e-12);
    }
}

#[test]
fn gallagher_global_peak_center_gives_f_opt() {
    for seed in 1..6 {
        let obj = make_function("gallagher21", 10, seed).unwrap();
        let x = obj.x_opt().unwrap();
        assert!((obj.eval(x) - obj.f_opt().unwrap()).abs() <= 1e-9);
        // Small perturbations around the centre never improve on it.
        let mut rng = seeded(seed);
        for _ in 0..200 {
            let mut y = x.to_vec();
            let d = Bounds::uniform(10, -1e-3, 1e-3).sample_uniform(&mut rng);
            y.iter_mut().zip(d).for_each(|(a, b)| *a += b);
            assert!(obj.eval(&y) >= obj.f_opt().unwrap());
        }
    }
}

#[test]
fn translation_consistency() {
    let a = vec![1.5, -2.0, 0.25, 3.0];
    let b = vec![-3.0, 0.5, 2.75, -1.0];
    let mut rng = seeded(8);
    for name in TRANSLATED {
        let make = |shift: &[f64]| {
            let inst = Instancing {
                shift: Shift::At(shift.to_vec()),
                rotation_seed: 99,
            };
            make_instance(name, 4, 0, &inst).unwrap()
        };
        let (fa, fb) = (make(&a), make(&b));
        for _ in 0..50 {
            let x = Bounds::uniform(4, -1.0, 1.0).sample_uniform(&mut rng);
            let xa: Vec<f64> = x.iter().zip(&a).map(|(x, s)| x + s).collect();
            let xb: Vec<f64> = x.iter().zip(&b).map(|(x, s)| x + s).collect();
            let (va, vb) = (fa.eval(&xa), fb.eval(&xb));
            assert!(
                (va - vb).abs() <= 1e-9 * (1.0 + va.abs()),
                "{name}: {va} vs {vb}"
            );
        }
    }
}

#[test]
fn unknown_names_and_tiny_dims_are_rejected() {
    assert!(make_function("bogus", 5, 1).is_err());
    assert!(make_function("sphere", 1, 1).is_err());
}

#[test]
fn normalization_maps_box_affinely() {
    let obj = make_function("rastrigin", 3, 2).unwrap();
    let unit = normalize_domain(obj.clone()).unwrap();
    assert_eq!(unit.bounds(), &Bounds::uniform(3, 0.0, 1.0));
    assert_eq!(unit.eval(&[0.5; 3]), obj.eval(&[0.0; 3]));
    assert_eq!(unit.eval(&[1.0; 3]), obj.eval(&[5.0; 3]));
    let u_opt = unit.x_opt().unwrap();
    assert!((unit.eval(u_opt) - obj.f_opt().unwrap()).abs() <= 1e-9);
}

#[test]
fn normalizing_an_unbounded_domain_fails() {
    let b = Bounds::uniform(2, f64::NEG_INFINITY, f64::INFINITY);
    let obj = ObjectiveInstance::from_fn("free", b, |x| x[0]);
    assert!(normalize_domain(obj).is_err());
}

#[test]
fn penalty_fixtures() {
    let inner = ObjectiveInstance::from_fn("lin", Bounds::uniform(3, 0.0, 1.0), |x| {
        x.iter().sum::<f64>()
    });
    let w = PenaltyWrapper::new(inner.clone());
    assert_eq!(w.penalize(&[0.2, 0.3, 0.4]), inner.eval(&[0.2, 0.3, 0.4]));
    let p = w.penalize(&[1.1, 0.5, 0.5]) - inner.eval(&[1.0, 0.5, 0.5]);
    assert!((p - 10.0).abs() < 1e-9);
    let p = w.penalize(&[-0.1, 1.2, 0.5]) - inner.eval(&[0.0, 1.0, 0.5]);
    assert!((p - 50.0).abs() < 1e-9);
}

#[test]
fn negation_flips_sign_and_optimum() {
    let obj = make_function("sphere", 3, 1).unwrap();
    let neg = negate(obj.clone());
    let x = [0.3, -0.2, 1.0];
    assert_eq!(neg.eval(&x), -obj.eval(&x));
    assert_eq!(neg.f_opt(), obj.f_opt().map(|f| -f));
}

proptest! {
    #[test]
    fn evaluation_is_deterministic(
        idx in 0usize..15,
        seed in 0u64..1000,
        x in prop::collection::vec(-5.0f64..5.0, 6),
    ) {
        let name = function_names()[idx];
        let a = make_function(name, 6, seed).unwrap();
        let b = make_function(name, 6, seed).unwrap();
        prop_assert_eq!(a.eval(&x).to_bits(), b.eval(&x).to_bits());
    }

    #[test]
    fn penalty_is_nonnegative_extra_and_identity_inside(
        x in prop::collection::vec(-8.0f64..8.0, 4),
    ) {
        let obj = make_function("rastrigin_rotated", 4, 2).unwrap();
        let w = PenaltyWrapper::new(obj.clone());
        let clamped = obj.bounds().clamp(&x);
        let extra = w.penalize(&x) - obj.eval(&clamped);
        prop_assert!(extra >= 0.0);
        if obj.bounds().contains(&x) {
            prop_assert_eq!(w.penalize(&x), obj.eval(&x));
        }
    }

    #[test]
    fn normalized_round_trip(u in prop::collection::vec(0.0f64..=1.0, 5), seed in 0u64..50) {
        let obj = make_function("weierstrass", 5, seed).unwrap();
        let unit = normalize_domain(obj.clone()).unwrap();
        let x: Vec<f64> = u.iter().map(|v| -5.0 + 10.0 * v).collect();
        prop_assert_eq!(unit.eval(&u), obj.eval(&x));
    }
}

/// A stand-in for an 18-D trajectory design problem: a bounded maximization
/// black box normalized to the unit cube, penalized outside it and negated
/// for minimization.
#[test]
fn bounded_maximization_pipeline() {
    let lo: Vec<f64> = (0..18).map(|i| -1.0 - i as f64).collect();
    let hi: Vec<f64> = (0..18).map(|i| 2.0 + 0.5 * i as f64).collect();
    let centre: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| 0.5 * (l + h)).collect();
    let c = centre.clone();
    let payload = ObjectiveInstance::from_fn("payload", Bounds::new(lo, hi).unwrap(), move |x| {
        let d: f64 = x.iter().zip(&c).map(|(a, b)| (a - b).powi(2)).sum();
        1000.0 / (1.0 + d)
    })
    .with_optimum(Some(centre), Some(1000.0));
    let problem = PenaltyWrapper::new(normalize_domain(negate(payload)).unwrap()).into_objective();
    assert_eq!(problem.dim(), 18);
    assert!((problem.eval(&[0.5; 18]) + 1000.0).abs() < 1e-9);
    assert_eq!(problem.f_opt(), Some(-1000.0));
    let outside = problem.eval(&[1.5; 18]);
    let boundary = problem.eval(&[1.0; 18]);
    assert!((outside - boundary - 1000.0 * 18.0 * 0.25).abs() < 1e-6);

    let policy = restart_cma::RestartPolicy::for_objective(restart_cma::RestartKind::Nbipop, &problem)
        .with_budget(20_000)
        .with_target(Some(-1000.0 + 1e-6));
    let result = restart_cma::run_with_restarts(&problem, &policy, &mut seeded(4)).unwrap();
    assert!(result.best_f <= -1000.0 + 1e-6, "{}", result.best_f);
}
