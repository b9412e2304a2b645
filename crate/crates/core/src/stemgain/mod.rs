//! Stem kernels and their noise gains: Frobenius, spectral and Monte Carlo
//! estimates, radial envelopes, and anti-aliased downsampling.

mod downsample;
mod envelope;
mod gain;
mod kernel;

pub use downsample::{
    downsample, downsample_gain_analytic, downsample_gain_monte_carlo, resolution_ratio,
    DownsampleOp, ResolutionRatio,
};
pub use envelope::{
    default_bin_width, envelope_value, fit_envelope, radial_profile, theorem1_bound_check,
    BinStatistic, EnvelopeFit, RadialProfile, RadialSample, Theorem1Check,
};
pub(crate) use gain::check_mc;
pub use gain::{
    kernel_spectrum, stem_gain_analytic, stem_gain_monte_carlo, stem_gain_spectral, GainEstimate,
};
pub use kernel::{Kernel, KernelKind};
