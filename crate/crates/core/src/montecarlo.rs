//! Deterministic Monte Carlo plumbing.
//!
//! Trials are evaluated in parallel, but each trial owns its random stream
//! (keyed by trial index) and results are reduced in trial order, so the
//! output never depends on the thread schedule.

use rayon::prelude::*;

/// Evaluates `trial(t)` for `t in 0..trials` and returns the results in
/// trial order.
pub fn run_trials<T, F>(trials: usize, trial: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..trials as u64).into_par_iter().map(trial).collect()
}

/// Sample mean and sample standard deviation (n - 1 denominator).
///
/// A single sample has standard deviation 0.
pub fn mean_std(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, (ss / (n - 1) as f64).sqrt())
}

/// Mean and standard error of the mean.
pub fn mean_stderr(samples: &[f64]) -> (f64, f64) {
    let (mean, std) = mean_std(samples);
    (mean, std / (samples.len() as f64).sqrt())
}
