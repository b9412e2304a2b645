//! Local model `A_i(tau) = p_i - rho_i tau + r_i(tau)` with
//! `|r_i(tau)| <= L_i tau^2`, and the rank flips it predicts.

use super::ModelRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobustnessProfile {
    /// Clean accuracy.
    pub p: f64,
    /// Accuracy lost per unit severity, `>= 0`.
    pub rho: f64,
    /// Curvature bound on the remainder.
    pub l: f64,
    /// Largest sampled severity.
    pub tau0: f64,
}

impl RobustnessProfile {
    pub fn new(p: f64, rho: f64, l: f64, tau0: f64) -> Result<Self> {
        if !(rho >= 0.0 && l >= 0.0 && tau0 > 0.0)
            || !p.is_finite()
            || !rho.is_finite()
            || !l.is_finite()
        {
            return Err(Error::InvalidParameter(format!(
                "profile needs rho >= 0, L >= 0, tau0 > 0; got rho={rho}, L={l}, tau0={tau0}"
            )));
        }
        Ok(Self { p, rho, l, tau0 })
    }

    /// First-order accuracy `p - rho tau`.
    pub fn linear(&self, tau: f64) -> f64 {
        self.p - self.rho * tau
    }
}

/// `p` from the `tau = 0` sample, `rho` by least squares on the drop
/// `p - acc` through the origin (clamped at 0), `L` as the largest
/// `|residual| / tau^2`.
pub fn fit_profile(record: &ModelRecord) -> Result<RobustnessProfile> {
    let s = &record.severity;
    let positive: Vec<(f64, f64)> = s.iter().copied().filter(|&(t, _)| t > 0.0).collect();
    if s.len() < 2 || s[0].0 != 0.0 || positive.is_empty() {
        return Err(Error::InsufficientSamples(record.model_id.clone()));
    }
    let p = s[0].1;
    let stt: f64 = positive.iter().map(|(t, _)| t * t).sum();
    let std: f64 = positive.iter().map(|(t, a)| t * (p - a)).sum();
    let rho = (std / stt).max(0.0);
    let l = positive
        .iter()
        .map(|&(t, a)| (a - (p - rho * t)).abs() / (t * t))
        .fold(0.0, f64::max);
    let tau0 = positive.last().map(|&(t, _)| t).unwrap_or(0.0);
    RobustnessProfile::new(p, rho, l, tau0)
}

/// Severity at which the first-order lines of `i` and `j` cross; `None`
/// for parallel lines.
pub fn flip_threshold(i: &RobustnessProfile, j: &RobustnessProfile) -> Option<f64> {
    if i.rho == j.rho {
        None
    } else {
        Some((i.p - j.p) / (i.rho - j.rho))
    }
}

/// `|(p_i - p_j) - (rho_i - rho_j) tau| > (L_i + L_j) tau^2`: the order at
/// `tau` is settled by the first-order terms.
pub fn margin_holds(i: &RobustnessProfile, j: &RobustnessProfile, tau: f64) -> bool {
    ((i.p - j.p) - (i.rho - j.rho) * tau).abs() > (i.l + j.l) * tau * tau
}

/// Indices `j != i` whose order relative to `i` is unresolved at `tau`.
pub fn ambiguous_set(i: usize, profiles: &[RobustnessProfile], tau: f64) -> Vec<usize> {
    (0..profiles.len())
        .filter(|&j| j != i && !margin_holds(&profiles[i], &profiles[j], tau))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlipPrediction {
    /// Rank change implied by first-order crossings in `(0, tau]`.
    pub predicted: i64,
    /// Number of ambiguous partners; bounds the error of `predicted`.
    pub ambiguity: usize,
}

pub fn predicted_rankdiff(i: usize, profiles: &[RobustnessProfile], tau: f64) -> FlipPrediction {
    let pi = &profiles[i];
    let mut predicted = 0i64;
    for (j, pj) in profiles.iter().enumerate() {
        if j == i {
            continue;
        }
        if let Some(t) = flip_threshold(pi, pj) {
            if t > 0.0 && t <= tau {
                // i overtakes a less robust j, or is overtaken by a more robust one
                predicted -= if pj.rho > pi.rho { 1 } else { -1 };
            }
        }
    }
    FlipPrediction {
        predicted,
        ambiguity: ambiguous_set(i, profiles, tau).len(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    I,
    J,
    Ambiguous,
}

impl Winner {
    pub fn name(self) -> &'static str {
        match self {
            Winner::I => "i",
            Winner::J => "j",
            Winner::Ambiguous => "ambiguous",
        }
    }
}

pub fn pairwise_winner(i: &RobustnessProfile, j: &RobustnessProfile, tau: f64) -> Winner {
    if !margin_holds(i, j, tau) {
        return Winner::Ambiguous;
    }
    if (i.p - j.p) - (i.rho - j.rho) * tau > 0.0 {
        Winner::I
    } else {
        Winner::J
    }
}
