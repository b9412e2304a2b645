//! Mean/std input normalization and the pixel-space Lipschitz bound
//! `L_z / sigma_min` it induces.

mod constants;
mod linalg;
mod verify;

pub use constants::{lipschitz_bound, normalize, sensitivity_ratio, NormConstants, PRESET_NAMES};
pub use linalg::{
    compose_with_normalization, power_iteration, random_map_with_norm, LinearMap, PowerIteration,
    DEFAULT_MAX_ITER, DEFAULT_TOL,
};
pub use verify::{verify_bound, BoundReport, DEFAULT_DIM, DEFAULT_MAPS};
