//! Square linear maps and spectral-norm estimation by power iteration.

use super::NormConstants;
use crate::error::{Error, Result};
use crate::field::SeedSpec;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Dense `n x n` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    n: usize,
    entries: Vec<f64>,
    nominal_norm: Option<f64>,
}

impl LinearMap {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("map dimension must be >= 1".into()));
        }
        if entries.len() != n * n {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {n}x{n} map",
                entries.len()
            )));
        }
        if let Some(i) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self {
            n,
            entries,
            nominal_norm: None,
        })
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        let mut entries = vec![0.0; n * n];
        for (i, &v) in values.iter().enumerate() {
            entries[i * n + i] = v;
        }
        Self::new(n, entries)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.n + col]
    }

    /// Spectral norm the map was scaled to, if any.
    pub fn nominal_norm(&self) -> Option<f64> {
        self.nominal_norm
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.entries
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn apply_transpose(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (row, &vi) in self.entries.chunks_exact(self.n).zip(v) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * vi;
            }
        }
        out
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration {
    /// Estimate of `||A||_2`.
    pub norm: f64,
    pub iterations: usize,
}

/// Iterates `v <- A^T A v / ||A^T A v||` from a Gaussian start drawn from
/// `seed` until the Rayleigh quotient changes by less than `tol` relative.
pub fn power_iteration(
    m: &LinearMap,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<PowerIteration> {
    if !(tol > 0.0) || max_iter == 0 {
        return Err(Error::InvalidParameter(format!(
            "need tol > 0 and max_iter >= 1, got {tol}, {max_iter}"
        )));
    }
    let mut rng = SeedSpec::new(seed, 0).stream();
    let mut v: Vec<f64> = (0..m.n).map(|_| rng.gaussian()).collect();
    let s = norm2(&v);
    v.iter_mut().for_each(|x| *x /= s);
    let mut lambda = f64::NAN;
    for it in 1..=max_iter {
        let w = m.apply_transpose(&m.apply(&v));
        let next: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        let wn = norm2(&w);
        if wn == 0.0 {
            return Ok(PowerIteration {
                norm: 0.0,
                iterations: it,
            });
        }
        if (next - lambda).abs() < tol * next.abs() {
            return Ok(PowerIteration {
                norm: next.max(0.0).sqrt(),
                iterations: it,
            });
        }
        lambda = next;
        v = w.into_iter().map(|x| x / wn).collect();
    }
    Err(Error::NoConvergence(max_iter))
}

/// I.i.d. Gaussian entries rescaled so the measured spectral norm is `l_z`.
pub fn random_map_with_norm(n: usize, l_z: f64, seed: u64) -> Result<LinearMap> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "map dimension must be >= 2, got {n}"
        )));
    }
    if !(l_z > 0.0) || !l_z.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "target norm must be > 0, got {l_z}"
        )));
    }
    let mut rng = SeedSpec::new(seed, 1).stream();
    let entries = (0..n * n).map(|_| rng.gaussian()).collect();
    let mut map = LinearMap::new(n, entries)?;
    let measured = power_iteration(&map, DEFAULT_TOL, DEFAULT_MAX_ITER, seed)?.norm;
    let scale = l_z / measured;
    map.entries.iter_mut().for_each(|x| *x *= scale);
    map.nominal_norm = Some(l_z);
    Ok(map)
}

/// `A D` with `D = diag(1 / sigma_c)` over three contiguous channel blocks.
pub fn compose_with_normalization(m: &LinearMap, c: &NormConstants) -> Result<LinearMap> {
    if !m.n.is_multiple_of(3) {
        return Err(Error::LayoutMismatch(m.n));
    }
    let block = m.n / 3;
    let std = c.std();
    let entries = m
        .entries
        .iter()
        .enumerate()
        .map(|(i, a)| a / std[(i % m.n) / block])
        .collect();
    LinearMap::new(m.n, entries)
}
