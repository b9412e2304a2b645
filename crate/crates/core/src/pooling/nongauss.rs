//! Pooling and filtering under Poisson and salt-and-pepper noise.

use super::window::median;
use crate::error::{Error, Result};
use crate::field::SeedSpec;
use crate::montecarlo::{mean_std, mean_stderr, run_trials};
use crate::stemgain::Kernel;

/// `A(y) = 2 sqrt(y + 3/8)`.
pub fn anscombe(y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(Error::NegativeCount(y));
    }
    Ok(2.0 * (y + 0.375).sqrt())
}

/// Output variance `xbar ||h||_2^2` of a linear filter applied to Poisson
/// counts of constant intensity `xbar`.
pub fn poisson_filter_variance(h: &Kernel, xbar: f64) -> Result<f64> {
    if !(xbar >= 0.0) || !xbar.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "intensity must be >= 0, got {xbar}"
        )));
    }
    Ok(xbar * h.frobenius_sq())
}

/// Sample variance of `sum h_i y_i` with `y_i ~ Poisson(xbar)` i.i.d.
pub fn poisson_filter_monte_carlo(h: &Kernel, xbar: f64, trials: usize, seed: u64) -> Result<f64> {
    poisson_filter_variance(h, xbar)?;
    if trials < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 trials, got {trials}"
        )));
    }
    let outputs = run_trials(trials, |t| {
        let mut rng = SeedSpec::new(seed, t).stream();
        h.weights()
            .iter()
            .map(|w| w * rng.poisson(xbar) as f64)
            .sum::<f64>()
    });
    let (_, std) = mean_std(&outputs);
    Ok(std * std)
}

/// Average-pool error under salt-and-pepper replacement of a constant
/// window `xbar in [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaltPepperError {
    /// `q (1/2 - xbar)`.
    pub mean: f64,
    /// `1 / m`, valid since pixel values lie in `[0, 1]`.
    pub variance_bound: f64,
}

fn check_salt_pepper(q: f64, xbar: f64, m: usize) -> Result<()> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidParameter(format!(
            "contamination must be in [0, 1], got {q}"
        )));
    }
    if !(0.0..=1.0).contains(&xbar) {
        return Err(Error::InvalidParameter(format!(
            "clean value must be in [0, 1], got {xbar}"
        )));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("window count must be >= 1".into()));
    }
    Ok(())
}

pub fn salt_pepper_avg_error(q: f64, xbar: f64, m: usize) -> Result<SaltPepperError> {
    check_salt_pepper(q, xbar, m)?;
    Ok(SaltPepperError {
        mean: q * (0.5 - xbar),
        variance_bound: 1.0 / m as f64,
    })
}

/// Each pixel is replaced with probability `q`, by 0 or 1 with equal odds.
fn contaminate(rng: &mut crate::field::NoiseStream, xbar: f64, q: f64, m: usize) -> Vec<f64> {
    (0..m)
        .map(|_| {
            if rng.bernoulli(q) {
                if rng.bernoulli(0.5) {
                    1.0
                } else {
                    0.0
                }
            } else {
                xbar
            }
        })
        .collect()
}

/// Monte Carlo `(mean, std error)` of the average-pool error.
pub fn salt_pepper_monte_carlo(
    q: f64,
    xbar: f64,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    check_salt_pepper(q, xbar, m)?;
    if trials < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 trials, got {trials}"
        )));
    }
    let errors = run_trials(trials, |t| {
        let mut rng = SeedSpec::new(seed, t).stream();
        contaminate(&mut rng, xbar, q, m).iter().sum::<f64>() / m as f64 - xbar
    });
    Ok(mean_stderr(&errors))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MedianRecovery {
    /// Fraction of trials whose median equals the clean value exactly.
    pub fraction: f64,
    /// `|med(a) - med(b)| <= ||a - b||_inf` held on every random pair.
    pub lipschitz_holds: bool,
}

/// Simulates salt-and-pepper contamination of a constant odd-sized window
/// and counts exact median recoveries; also checks median pooling is
/// 1-Lipschitz in the sup norm on random pairs.
pub fn median_recovery_check(
    xbar: f64,
    q: f64,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<MedianRecovery> {
    if m.is_multiple_of(2) {
        return Err(Error::EvenWindow(m));
    }
    check_salt_pepper(q, xbar, m)?;
    if q >= 0.5 {
        return Err(Error::InvalidParameter(format!(
            "contamination must be below 1/2, got {q}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least 1 trial".into()));
    }
    let outcomes = run_trials(trials, |t| {
        let mut rng = SeedSpec::new(seed, t).stream();
        let recovered = median(&contaminate(&mut rng, xbar, q, m)) == xbar;
        let a: Vec<f64> = (0..m).map(|_| rng.uniform_range(-1.0, 1.0)).collect();
        let b: Vec<f64> = a.iter().map(|v| v + rng.uniform_range(-0.5, 0.5)).collect();
        let sup = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        let lipschitz = (median(&a) - median(&b)).abs() <= sup;
        (recovered, lipschitz)
    });
    let hits = outcomes.iter().filter(|o| o.0).count();
    Ok(MedianRecovery {
        fraction: hits as f64 / trials as f64,
        lipschitz_holds: outcomes.iter().all(|o| o.1),
    })
}
