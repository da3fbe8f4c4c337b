use std::collections::BTreeMap;
use std::path::Path;

use restart_cma::harness::{
    compute_ert, compute_sp1, load_records, run_experiment, success_count, ExperimentConfig,
    ERT_CSV_HEADER,
};
use restart_cma::ConfigError;
use restart_cma::ReportError;

fn config(json: &str) -> ExperimentConfig {
    serde_json::from_str(json).unwrap()
}

fn small() -> ExperimentConfig {
    config(
        r#"{
            "functions": ["sphere", "rastrigin"],
            "dims": [3],
            "strategies": ["ipop", "nbipop"],
            "trials": 15,
            "budget": 3000,
            "delta_f": [1.0, 1e-2, 1e-8]
        }"#,
    )
}

fn read_tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.insert(rel, std::fs::read(&p).unwrap());
            }
        }
    }
    out
}

#[test]
fn cell_arithmetic_and_persistence() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_experiment(&small(), 1, Some(dir.path())).unwrap();
    assert_eq!(out.records.len(), 60);
    let records_dir = dir.path().join("records").join("instance-1");
    let files = std::fs::read_dir(&records_dir).unwrap().count();
    assert_eq!(files, 60);
    assert!(records_dir.join("rastrigin_3D_nbipop_t14.json").exists());

    let mut loaded = load_records(&dir.path().join("records")).unwrap();
    let mut mem = out.records.clone();
    let key = |r: &restart_cma::harness::TrialRecord| (r.function.clone(), r.strategy.as_str(), r.trial);
    loaded.sort_by_key(key);
    mem.sort_by_key(key);
    assert_eq!(loaded, mem);

    let csv = std::fs::read_to_string(dir.path().join("ert.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), ERT_CSV_HEADER);
    assert_eq!(csv.lines().count(), 1 + 2 * 2 * 3);
    for r in &out.records {
        assert!(r.total_evals <= 3000);
        assert_eq!(r.rng, restart_cma::rng::RNG_ALGORITHM);
        assert!(r.wall_clock_ms.is_none());
    }
}

#[test]
fn rerun_is_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_experiment(&small(), 42, Some(a.path())).unwrap();
    run_experiment(&small(), 42, Some(b.path())).unwrap();
    let (ta, tb) = (read_tree(a.path()), read_tree(b.path()));
    assert_eq!(ta.len(), 62);
    assert_eq!(ta, tb);
}

#[test]
fn sphere_d5_ipop_always_succeeds() {
    let cfg = config(
        r#"{"functions": ["sphere"], "dims": [5], "strategies": ["ipop"], "budget": 100000}"#,
    );
    let out = run_experiment(&cfg, 0, None).unwrap();
    let row = out.report.find("sphere", "ipop", 1e-8).unwrap();
    assert_eq!(row.successes, 15);
    assert_eq!(row.trials, 15);
    assert!(row.ert.is_finite());
}

#[test]
fn report_matches_independent_recomputation() {
    let out = run_experiment(&small(), 5, None).unwrap();
    for row in &out.report.rows {
        let group: Vec<_> = out
            .records
            .iter()
            .filter(|r| r.function == row.function && r.strategy.as_str() == row.strategy)
            .cloned()
            .collect();
        let f_opt = group[0].f_opt.unwrap();
        let target = f_opt + row.delta_f;
        let mut total = 0u64;
        let mut hits = Vec::new();
        for r in &group {
            match r.trace.iter().find(|p| p.f <= target) {
                Some(p) => {
                    total += p.evals;
                    hits.push(p.evals);
                }
                None => total += r.total_evals,
            }
        }
        let ert = if hits.is_empty() { f64::INFINITY } else { total as f64 / hits.len() as f64 };
        let sp1 = if hits.is_empty() {
            f64::INFINITY
        } else {
            let mean = hits.iter().sum::<u64>() as f64 / hits.len() as f64;
            mean / (hits.len() as f64 / group.len() as f64)
        };
        assert_eq!(row.ert, ert);
        assert_eq!(row.sp1, sp1);
        assert_eq!(row.ert, compute_ert(&group, f_opt, row.delta_f));
        assert_eq!(row.sp1, compute_sp1(&group, f_opt, row.delta_f));
        assert_eq!(row.successes, success_count(&group, f_opt, row.delta_f));
    }
}

#[test]
fn ert_is_monotone_in_precision() {
    let out = run_experiment(&small(), 9, None).unwrap();
    for f in ["sphere", "rastrigin"] {
        for s in ["ipop", "nbipop"] {
            let e: Vec<f64> = [1.0, 1e-2, 1e-8]
                .iter()
                .map(|d| out.report.find(f, s, *d).unwrap().ert)
                .collect();
            assert!(e[0] <= e[1] && e[1] <= e[2], "{f} {s}: {e:?}");
        }
    }
}

#[test]
fn seed_isolation_across_trial_counts() {
    let base = small();
    let mut more = small();
    more.trials = 17;
    let a = run_experiment(&base, 3, None).unwrap();
    let b = run_experiment(&more, 3, None).unwrap();
    for r in &a.records {
        let twin = b
            .records
            .iter()
            .find(|o| o.function == r.function && o.strategy == r.strategy && o.trial == r.trial)
            .unwrap();
        assert_eq!(r, twin);
    }
}

#[test]
fn configuration_errors_surface_before_any_run() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small();
    cfg.functions.push("no_such_function".into());
    let err = run_experiment(&cfg, 0, Some(dir.path())).unwrap_err();
    assert!(matches!(err, ReportError::Config(ConfigError::UnknownFunction(_))));
    assert!(!dir.path().join("records").exists());

    let mut cfg = small();
    cfg.strategies.push("cmaes-random".into());
    let err = run_experiment(&cfg, 0, None).unwrap_err();
    assert!(matches!(err, ReportError::Config(ConfigError::UnknownStrategy(_))));

    let bad = r#"{"functions": ["sphere"], "dims": [3], "strategies": ["ipop"], "budget": 10, "color": 1}"#;
    assert!(serde_json::from_str::<ExperimentConfig>(bad).is_err());
}

#[test]
fn config_file_loads_and_resolves_env_seed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exp.json");
    std::fs::write(
        &path,
        r#"{"functions": ["sphere"], "dims": [2], "strategies": ["BIPOP-aCMA-ES"], "budget": 500, "base_seed": 11}"#,
    )
    .unwrap();
    let cfg = ExperimentConfig::load(&path).unwrap();
    assert_eq!(cfg.trials, 15);
    assert_eq!(cfg.delta_f.len(), 10);
    assert_eq!(cfg.resolved_seed(None).unwrap(), 11);
    assert_eq!(cfg.resolved_seed(Some("99")).unwrap(), 99);
    assert!(cfg.resolved_seed(Some("x")).is_err());
    assert!(ExperimentConfig::load(&dir.path().join("missing.json")).is_err());
}
