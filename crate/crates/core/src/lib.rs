//! Numerical verification toolkit for noise robustness of vision front ends.
//!
//! The crate covers five areas:
//!
//! * [`field`]: a radix-2 2D FFT, periodic convolution and a seedable
//!   Gaussian noise source shared by every Monte Carlo estimator.
//! * [`stemgain`]: noise gain of stem kernels and anti-aliased downsampling,
//!   radial spectral profiles and low-pass envelope fitting.
//! * [`pooling`]: average / max / nearest / median pooling and their error
//!   statistics under additive noise (closed forms, Gauss-Hermite
//!   quadrature, Monte Carlo) plus Poisson and salt-and-pepper extensions.
//! * [`normlip`]: mean-std normalization presets, spectral norms by power
//!   iteration and the pixel-space Lipschitz bound `L_z / sigma_min`.
//! * [`rankdiff`]: rank changes between clean and noisy accuracy tables and
//!   the first-order flip analysis that explains them.
//!
//! Every random quantity is a pure function of a `(master_seed, stream_id)`
//! pair, so results are identical across runs and thread counts.

// `!(x > 0.0)` guards are written that way so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod field;
pub mod montecarlo;
pub mod normlip;
pub mod pooling;
pub mod rankdiff;
pub mod stemgain;

pub use error::{Error, Result};
pub use field::{FieldGrid, SeedSpec, Spectrum};
