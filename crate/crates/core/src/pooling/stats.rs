//! Bias, variance and MSE of pooled noise `pool(S + eta) - pool(S)` for
//! i.i.d. `N(0, sigma^2)` noise.

use super::quadrature::{gauss_hermite_rule, max_moments_with};
use super::{PoolType, PoolWindow};
use crate::error::{Error, Result};
use crate::field::SeedSpec;
use crate::montecarlo::{mean_std, run_trials};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoolMethod {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

impl PoolMethod {
    pub fn name(self) -> &'static str {
        match self {
            PoolMethod::ClosedForm => "closed_form",
            PoolMethod::Quadrature => "quadrature",
            PoolMethod::MonteCarlo => "monte_carlo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoolStats {
    pub bias: f64,
    pub variance: f64,
    pub mse: f64,
    pub method: PoolMethod,
    /// Standard error of `mse` (Monte Carlo only).
    pub std_error: Option<f64>,
    /// Standard error of `bias` (Monte Carlo only).
    pub bias_std_error: Option<f64>,
}

impl PoolStats {
    fn exact(bias: f64, mse: f64, method: PoolMethod) -> Self {
        Self {
            bias,
            variance: mse - bias * bias,
            mse,
            method,
            std_error: None,
            bias_std_error: None,
        }
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "sigma must be >= 0, got {sigma}"
        )));
    }
    Ok(())
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("window count must be >= 1".into()));
    }
    Ok(())
}

/// Average pooling is unbiased with variance `sigma^2 / k`.
pub fn avg_error_stats(k: usize, sigma: f64) -> Result<PoolStats> {
    check_k(k)?;
    check_sigma(sigma)?;
    Ok(PoolStats::exact(
        0.0,
        sigma * sigma / k as f64,
        PoolMethod::ClosedForm,
    ))
}

/// Max pooling over a constant window: the error is `sigma M_k`.
pub fn max_error_stats_uniform(k: usize, sigma: f64, order: usize) -> Result<PoolStats> {
    check_k(k)?;
    check_sigma(sigma)?;
    let rule = gauss_hermite_rule(order)?;
    let (m1, m2) = max_moments_with(&rule, k);
    Ok(PoolStats::exact(
        sigma * m1,
        sigma * sigma * m2,
        PoolMethod::Quadrature,
    ))
}

/// One Monte Carlo draw of the pooling error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoolErrorSample {
    pub error: f64,
    /// `max_i |y_i - s_i|` of the same draw.
    pub max_abs_noise: f64,
}

/// Per-trial errors; trial `t` draws its noise from `SeedSpec(seed, t)`.
pub fn pool_error_samples(
    window: &PoolWindow,
    sigma: f64,
    pool: PoolType,
    trials: usize,
    seed: u64,
) -> Result<Vec<PoolErrorSample>> {
    check_sigma(sigma)?;
    let clean = pool.apply(window.values());
    Ok(run_trials(trials, |t| {
        let mut rng = SeedSpec::new(seed, t).stream();
        let noisy: Vec<f64> = window
            .values()
            .iter()
            .map(|&v| v + sigma * rng.gaussian())
            .collect();
        // noise as realized after rounding, so the pathwise bound is exact
        let max_abs_noise = noisy
            .iter()
            .zip(window.values())
            .map(|(y, v)| (y - v).abs())
            .fold(0.0f64, f64::max);
        PoolErrorSample {
            error: pool.apply(&noisy) - clean,
            max_abs_noise,
        }
    }))
}

/// Empirical bias, variance and MSE over at least 100 trials.
pub fn pool_error_monte_carlo(
    window: &PoolWindow,
    sigma: f64,
    pool: PoolType,
    trials: usize,
    seed: u64,
) -> Result<PoolStats> {
    if trials < 100 {
        return Err(Error::InvalidParameter(format!(
            "need at least 100 trials, got {trials}"
        )));
    }
    let samples = pool_error_samples(window, sigma, pool, trials, seed)?;
    let errors: Vec<f64> = samples.iter().map(|s| s.error).collect();
    let squares: Vec<f64> = errors.iter().map(|e| e * e).collect();
    let n = trials as f64;
    let (bias, std) = mean_std(&errors);
    let (mse, sq_std) = mean_std(&squares);
    Ok(PoolStats {
        bias,
        variance: std * std,
        mse,
        method: PoolMethod::MonteCarlo,
        std_error: Some(sq_std / n.sqrt()),
        bias_std_error: Some(std / n.sqrt()),
    })
}

/// Max-pool MSE for the window `(0, -gap, ..., -gap)` of `k` values.
pub fn large_gap_mse(gap: f64, sigma: f64, k: usize, trials: usize, seed: u64) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "gap window needs k >= 2, got {k}"
        )));
    }
    let mut values = vec![-gap; k];
    values[0] = 0.0;
    let window = PoolWindow::new(values)?;
    Ok(pool_error_monte_carlo(&window, sigma, PoolType::Max, trials, seed)?.mse)
}

/// Monte Carlo `(mean, std error)` of `A_k^2 = max_i Z_i^2` over `k`
/// standard normals.
pub fn abs_max_second_moment_monte_carlo(k: usize, trials: usize, seed: u64) -> Result<(f64, f64)> {
    check_k(k)?;
    if trials < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 trials, got {trials}"
        )));
    }
    let samples = run_trials(trials, |t| {
        let mut rng = SeedSpec::new(seed, t).stream();
        (0..k)
            .map(|_| rng.gaussian().abs())
            .fold(0.0f64, f64::max)
            .powi(2)
    });
    let (mean, std) = mean_std(&samples);
    Ok((mean, std / (trials as f64).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let a = avg_error_stats(4, 1.0).unwrap();
        assert_eq!((a.bias, a.variance, a.mse), (0.0, 0.25, 0.25));
        assert_eq!(avg_error_stats(1, 3.0).unwrap().mse, 9.0);
        assert!((avg_error_stats(36, 1.0).unwrap().mse - 0.027778).abs() < 5e-7);
        assert_eq!(a.method, PoolMethod::ClosedForm);
    }

    #[test]
    fn max_uniform_table_values() {
        let s = max_error_stats_uniform(16, 1.0, 64).unwrap();
        assert!((s.bias - 1.76599).abs() < 1e-4 && (s.mse - 3.41374).abs() < 1e-4);
        assert!((s.mse - (s.bias * s.bias + s.variance)).abs() < 1e-10);
        let s = max_error_stats_uniform(25, 2.0, 64).unwrap();
        assert!((s.bias - 2.0 * 1.96531).abs() < 4e-4 && (s.mse - 4.0 * 4.12097).abs() < 4e-4);
        let one = max_error_stats_uniform(1, 1.5, 64).unwrap();
        assert!(one.bias.abs() < 1e-12 && (one.mse - 2.25).abs() < 1e-12);
    }

    #[test]
    fn zero_noise_is_exact() {
        let w = PoolWindow::new(vec![0.3, 1.0, -2.0, 0.5]).unwrap();
        for p in [PoolType::Avg, PoolType::Max, PoolType::Nn, PoolType::Median] {
            let s = pool_error_monte_carlo(&w, 0.0, p, 100, 1).unwrap();
            assert_eq!((s.bias, s.mse), (0.0, 0.0));
        }
    }

    #[test]
    fn pathwise_bound_and_bias_sign() {
        let w = PoolWindow::new(vec![0.0, -0.3, 0.2, -1.0, 0.1, 0.15]).unwrap();
        let samples = pool_error_samples(&w, 1.0, PoolType::Max, 5000, 9).unwrap();
        assert!(samples.iter().all(|s| s.error.abs() <= s.max_abs_noise));
        let s = pool_error_monte_carlo(&w, 1.0, PoolType::Max, 5000, 9).unwrap();
        assert!(s.bias >= -4.0 * s.bias_std_error.unwrap());
    }

    #[test]
    fn avg_monte_carlo_regime() {
        let w = PoolWindow::uniform(9, 0.0).unwrap();
        let s = pool_error_monte_carlo(&w, 1.0, PoolType::Avg, 20_000, 4).unwrap();
        assert!((s.mse - 1.0 / 9.0).abs() <= 4.0 * s.std_error.unwrap());
        assert!(pool_error_monte_carlo(&w, 1.0, PoolType::Avg, 99, 4).is_err());
    }

    #[test]
    fn gap_mse_limits() {
        assert!(large_gap_mse(1.0, 1.0, 1, 100, 0).is_err());
        let tiny = large_gap_mse(1.0, 1e-6, 4, 1000, 2).unwrap();
        assert!(tiny < 1e-11);
    }

    #[test]
    fn abs_max_k1_is_chi_square() {
        let (m, se) = abs_max_second_moment_monte_carlo(1, 20_000, 5).unwrap();
        assert!((m - 1.0).abs() < 4.0 * se);
    }
}
