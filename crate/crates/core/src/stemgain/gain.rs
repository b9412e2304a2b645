//! Per-pixel noise gain of a stem kernel,
//! `gamma(K) = E||K * eta||^2 / (sigma^2 H W)`, by three routes: the squared
//! Frobenius norm, the mean squared transfer function, and simulation.

use super::Kernel;
use crate::error::{Error, Result};
use crate::field::{embed_kernel, white_noise, Convolver, Fft2Plan, SeedSpec, Spectrum};
use crate::montecarlo::{mean_std, run_trials};

/// Sample mean and standard deviation of a Monte Carlo gain estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainEstimate {
    pub mean: f64,
    pub std: f64,
    pub trials: usize,
}

impl GainEstimate {
    pub(crate) fn from_samples(samples: &[f64]) -> Self {
        let (mean, std) = mean_std(samples);
        Self {
            mean,
            std,
            trials: samples.len(),
        }
    }

    /// `|mean - target| <= n_std * std`.
    pub fn within(&self, target: f64, n_std: f64) -> bool {
        (self.mean - target).abs() <= n_std * self.std
    }
}

/// `||K||_F^2`.
pub fn stem_gain_analytic(kernel: &Kernel) -> f64 {
    kernel.frobenius_sq()
}

/// DFT of the centred kernel embedded in an `height x width` grid.
pub fn kernel_spectrum(kernel: &Kernel, height: usize, width: usize) -> Result<Spectrum> {
    let plan = Fft2Plan::new(height, width)?;
    if kernel.side() > height.min(width) {
        return Err(Error::KernelTooLarge {
            side: kernel.side(),
            height,
            width,
        });
    }
    let mut buf = embed_kernel(kernel, height, width);
    plan.forward(&mut buf);
    Spectrum::new(height, width, buf)
}

/// `(1 / HW) sum_w |K^(w)|^2`.
pub fn stem_gain_spectral(kernel: &Kernel, height: usize, width: usize) -> Result<f64> {
    Ok(kernel_spectrum(kernel, height, width)?.mean_power())
}

/// Trial `t` filters `white_noise(.., SeedSpec(seed, t))` and records
/// `||K * eta||^2 / (sigma^2 H W)`.
pub fn stem_gain_monte_carlo(
    kernel: &Kernel,
    height: usize,
    width: usize,
    sigma: f64,
    trials: usize,
    seed: u64,
) -> Result<GainEstimate> {
    check_mc(sigma, trials)?;
    let conv = Convolver::new(kernel, height, width)?;
    let norm = sigma * sigma * (height * width) as f64;
    let samples = run_trials(trials, |t| -> Result<f64> {
        let eta = white_noise(height, width, sigma, SeedSpec::new(seed, t))?;
        Ok(conv.apply(&eta)?.energy() / norm)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(GainEstimate::from_samples(&samples))
}

pub(crate) fn check_mc(sigma: f64, trials: usize) -> Result<()> {
    if trials < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 trials, got {trials}"
        )));
    }
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "sigma must be > 0, got {sigma}"
        )));
    }
    Ok(())
}
