use super::linalg::{
    compose_with_normalization, power_iteration, random_map_with_norm, DEFAULT_MAX_ITER,
    DEFAULT_TOL,
};
use super::{lipschitz_bound, NormConstants};
use crate::error::{Error, Result};
use crate::field::SeedSpec;
use crate::montecarlo::run_trials;

pub const DEFAULT_DIM: usize = 48;
pub const DEFAULT_MAPS: usize = 32;

/// Measured `||A D||_2` against `L_z / sigma_min` over random maps.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub preset: String,
    pub bound: f64,
    pub max_measured: f64,
    /// `bound / max_measured`.
    pub ratio: f64,
    pub measured: Vec<f64>,
}

/// Draws `num_maps` maps with `||A||_2 = l_z`, composes each with the
/// normalization and measures the result by power iteration. Any map whose
/// norm exceeds `bound (1 + tol)` is a violation.
pub fn verify_bound(
    n: usize,
    l_z: f64,
    c: &NormConstants,
    num_maps: usize,
    tol: f64,
    seed: u64,
) -> Result<BoundReport> {
    if num_maps == 0 {
        return Err(Error::InvalidParameter("need at least one map".into()));
    }
    let bound = lipschitz_bound(l_z, c)?;
    let measured = run_trials(num_maps, |i| -> Result<f64> {
        let map_seed = SeedSpec::new(seed, i).stream().next_u64();
        let a = random_map_with_norm(n, l_z, map_seed)?;
        let ad = compose_with_normalization(&a, c)?;
        Ok(power_iteration(&ad, DEFAULT_TOL, DEFAULT_MAX_ITER, map_seed ^ 1)?.norm)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let max_measured = measured.iter().copied().fold(0.0f64, f64::max);
    if max_measured > bound * (1.0 + tol) {
        return Err(Error::BoundViolated {
            measured: max_measured,
            bound,
        });
    }
    Ok(BoundReport {
        preset: c.name().to_string(),
        bound,
        max_measured,
        ratio: bound / max_measured,
        measured,
    })
}
