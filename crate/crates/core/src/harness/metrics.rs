//! Expected running time and SP1.

use crate::cma::TracePoint;

use super::record::TrialRecord;

/// Anything with a best-so-far trace and a consumed-evaluation count.
pub trait TrialTrace {
    fn trace(&self) -> &[TracePoint];
    fn total_evals(&self) -> u64;
}

impl TrialTrace for TrialRecord {
    fn trace(&self) -> &[TracePoint] {
        &self.trace
    }

    fn total_evals(&self) -> u64 {
        self.total_evals
    }
}

impl TrialTrace for (Vec<TracePoint>, u64) {
    fn trace(&self) -> &[TracePoint] {
        &self.0
    }

    fn total_evals(&self) -> u64 {
        self.1
    }
}

/// Evaluations up to and including the first value `≤ target`, or `None`.
pub fn evals_to_target<T: TrialTrace + ?Sized>(trial: &T, target: f64) -> Option<u64> {
    trial.trace().iter().find(|p| p.f <= target).map(|p| p.evals)
}

/// Summed evaluations over all trials (to target for successes, everything
/// consumed otherwise) divided by the number of successes; `∞` without any.
pub fn compute_ert<T: TrialTrace>(records: &[T], f_opt: f64, delta_f: f64) -> f64 {
    let target = f_opt + delta_f;
    let mut total = 0u64;
    let mut successes = 0u64;
    for r in records {
        match evals_to_target(r, target) {
            Some(e) => {
                total += e;
                successes += 1;
            }
            None => total += r.total_evals(),
        }
    }
    if successes == 0 {
        f64::INFINITY
    } else {
        total as f64 / successes as f64
    }
}

/// Mean evaluations of successful trials divided by the success rate; `∞`
/// without any success.
pub fn compute_sp1<T: TrialTrace>(records: &[T], f_opt: f64, delta_f: f64) -> f64 {
    let target = f_opt + delta_f;
    let hits: Vec<u64> = records
        .iter()
        .filter_map(|r| evals_to_target(r, target))
        .collect();
    if hits.is_empty() {
        return f64::INFINITY;
    }
    let mean = hits.iter().sum::<u64>() as f64 / hits.len() as f64;
    let rate = hits.len() as f64 / records.len() as f64;
    mean / rate
}

pub fn success_count<T: TrialTrace>(records: &[T], f_opt: f64, delta_f: f64) -> usize {
    records
        .iter()
        .filter(|r| evals_to_target(*r, f_opt + delta_f).is_some())
        .count()
}

/// Median of `values`; `NaN` for an empty slice.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Median number of evaluations conducted per trial.
pub fn median_evals<T: TrialTrace>(records: &[T]) -> f64 {
    let evals: Vec<f64> = records.iter().map(|r| r.total_evals() as f64).collect();
    median(&evals)
}
