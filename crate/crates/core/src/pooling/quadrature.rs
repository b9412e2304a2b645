//! Standard normal CDF and Gauss–Hermite quadrature for moments of the
//! maximum of i.i.d. standard normals.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 128;
pub const DEFAULT_ORDER: usize = 64;

/// `Phi(x) = erfc(-x / sqrt 2) / 2`.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Nodes and weights integrating against `exp(-x^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `sum_i w_i f(x_i)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Roots of `H_n` by Newton's method on the orthonormal Hermite recurrence,
/// seeded with the usual asymptotic guesses for the largest roots and
/// extrapolation from previous roots for the rest.
pub fn gauss_hermite_rule(order: usize) -> Result<QuadratureRule> {
    if order == 0 || order > MAX_ORDER {
        return Err(Error::InvalidParameter(format!(
            "quadrature order must be in 1..={MAX_ORDER}, got {order}"
        )));
    }
    let n = order;
    let nf = n as f64;
    let pim4 = PI.powf(-0.25);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    let mut z = 0.0f64;
    for i in 0..half {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut converged = false;
        let mut pp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (pim4, 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let step = p1 / pp;
            z -= step;
            if step.abs() <= 1e-15 * z.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged || !z.is_finite() {
            return Err(Error::ConvergenceFailure { order: n, root: i });
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    if n % 2 == 1 {
        nodes[half - 1] = 0.0;
    }
    Ok(QuadratureRule { nodes, weights })
}

/// `(E[M_k], E[M_k^2])` for `M_k` the maximum of `k` standard normals, from
/// `E[M_k^p] = k int z^p phi(z) Phi(z)^(k-1) dz` with `z = sqrt 2 x`.
pub fn max_moments(k: usize, order: usize) -> Result<(f64, f64)> {
    if k == 0 {
        return Err(Error::InvalidParameter("window count must be >= 1".into()));
    }
    let rule = gauss_hermite_rule(order)?;
    Ok(max_moments_with(&rule, k))
}

pub(crate) fn max_moments_with(rule: &QuadratureRule, k: usize) -> (f64, f64) {
    let scale = k as f64 / PI.sqrt();
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        let z = SQRT_2 * x;
        let c = w * std_normal_cdf(z).powi(k as i32 - 1);
        m1 += c * z;
        m2 += c * z * z;
    }
    (scale * m1, scale * m2)
}

/// `2 ln(2k) + 2 >= E[max_i |Z_i|^2]`.
pub fn abs_max_second_moment_bound(k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("window count must be >= 1".into()));
    }
    Ok(2.0 * (2.0 * k as f64).ln() + 2.0)
}
