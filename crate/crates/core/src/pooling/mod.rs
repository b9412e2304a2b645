//! Pooling operators and the statistics of pooled Gaussian and non-Gaussian
//! noise.

mod nongauss;
mod quadrature;
mod stats;
mod window;

pub use nongauss::{
    anscombe, median_recovery_check, poisson_filter_monte_carlo, poisson_filter_variance,
    salt_pepper_avg_error, salt_pepper_monte_carlo, MedianRecovery, SaltPepperError,
};
pub use quadrature::{
    abs_max_second_moment_bound, gauss_hermite_rule, max_moments, std_normal_cdf, QuadratureRule,
    DEFAULT_ORDER, MAX_ORDER,
};
pub use stats::{
    abs_max_second_moment_monte_carlo, avg_error_stats, large_gap_mse, max_error_stats_uniform,
    pool_error_monte_carlo, pool_error_samples, PoolErrorSample, PoolMethod, PoolStats,
};
pub use window::{pool_avg, pool_lipschitz, pool_max, pool_median, pool_nn, PoolType, PoolWindow};
