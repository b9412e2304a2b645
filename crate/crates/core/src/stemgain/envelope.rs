//! Radial spectral profiles and the low-pass envelope
//! `phi_k(r) = (1 + beta k r)^-(1 + delta)`.

use std::f64::consts::PI;

use super::{kernel_spectrum, Kernel};
use crate::error::{Error, Result};

/// Statistic recorded for each radial bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinStatistic {
    /// Average magnitude over the DFT points of the bin.
    Mean,
    /// Largest magnitude in the bin; an envelope above it bounds every point.
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialSample {
    /// Bin centre in radians.
    pub radius: f64,
    pub magnitude: f64,
    /// DFT points that fell in the bin.
    pub count: usize,
}

/// `|K^|` binned by `||w||_2` over radii in `[2 pi / N, pi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub samples: Vec<RadialSample>,
    pub bin_width: f64,
    pub statistic: BinStatistic,
    pub grid_side: usize,
}

impl RadialProfile {
    /// Sample whose bin contains `r`, or the nearest populated bin.
    pub fn nearest(&self, r: f64) -> Option<&RadialSample> {
        self.samples
            .iter()
            .min_by(|a, b| (a.radius - r).abs().total_cmp(&(b.radius - r).abs()))
    }
}

/// Bin width that splits `[0, pi sqrt 2]` into 600 bins.
pub fn default_bin_width() -> f64 {
    PI * std::f64::consts::SQRT_2 / 600.0
}

/// Angular frequency of DFT index `a` on an `n`-point axis, in `(-pi, pi]`.
fn frequency(a: usize, n: usize) -> f64 {
    let signed = if a > n / 2 {
        a as f64 - n as f64
    } else {
        a as f64
    };
    2.0 * PI * signed / n as f64
}

/// Embeds the kernel in a `grid_side^2` grid and bins `|K^(w)|` by radius.
///
/// Bin `i` covers `[i w, (i + 1) w)` and is reported at its centre. Only
/// populated bins with centre in `[2 pi / grid_side, pi]` are kept: below
/// the infrared cutoff a bin holds nothing but the DC sample.
pub fn radial_profile(
    kernel: &Kernel,
    grid_side: usize,
    bin_width: f64,
    statistic: BinStatistic,
) -> Result<RadialProfile> {
    if !(bin_width > 0.0) || !bin_width.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "bin width must be > 0, got {bin_width}"
        )));
    }
    let spectrum = kernel_spectrum(kernel, grid_side, grid_side)?;
    let n = grid_side;
    let n_bins = (PI * std::f64::consts::SQRT_2 / bin_width).ceil() as usize + 1;
    let mut sum = vec![0.0f64; n_bins];
    let mut max = vec![0.0f64; n_bins];
    let mut count = vec![0usize; n_bins];
    for a in 0..n {
        let wa = frequency(a, n);
        for b in 0..n {
            let r = wa.hypot(frequency(b, n));
            let bin = ((r / bin_width) as usize).min(n_bins - 1);
            let m = spectrum.get(a, b).norm();
            sum[bin] += m;
            max[bin] = max[bin].max(m);
            count[bin] += 1;
        }
    }
    let cutoff = 2.0 * PI / n as f64;
    let samples = (0..n_bins)
        .filter(|&i| count[i] > 0)
        .map(|i| RadialSample {
            radius: (i as f64 + 0.5) * bin_width,
            magnitude: match statistic {
                BinStatistic::Mean => sum[i] / count[i] as f64,
                BinStatistic::Max => max[i],
            },
            count: count[i],
        })
        .filter(|s| s.radius >= cutoff && s.radius <= PI)
        .collect();
    Ok(RadialProfile {
        samples,
        bin_width,
        statistic,
        grid_side,
    })
}

/// Fitted envelope parameters for one kernel scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeFit {
    pub beta: f64,
    pub delta: f64,
    pub k: usize,
    /// Log-MSE of the unrepaired fit.
    pub fit_loss: f64,
    /// Envelope lies on or above every profiled magnitude.
    pub dominated: bool,
    /// Number of 0.99 shrink steps applied to `beta` to restore domination.
    pub repair_steps: usize,
}

impl EnvelopeFit {
    pub fn value(&self, r: f64) -> f64 {
        envelope_value(self, r)
    }
}

/// `(1 + beta k r)^-(1 + delta)`.
pub fn envelope_value(fit: &EnvelopeFit, r: f64) -> f64 {
    phi(fit.beta, fit.delta, fit.k as f64, r)
}

#[inline]
fn phi(beta: f64, delta: f64, k: f64, r: f64) -> f64 {
    (1.0 + beta * k * r).powf(-(1.0 + delta))
}

const BETA_K_RANGE: (f64, f64) = (0.05, 50.0);
const DELTA_RANGE: (f64, f64) = (0.05, 4.0);
const BETA_GRID: usize = 64;
const DELTA_GRID: usize = 32;
const REFINE_ROUNDS: usize = 20;
const GOLDEN_ITERS: usize = 40;
const REPAIR_FACTOR: f64 = 0.99;
const REPAIR_STEPS: usize = 500;

/// Fits `phi_k` to a radial profile by uniform-weight log-MSE, then shrinks
/// `beta` until the envelope dominates every bin (or gives up).
///
/// Search: `beta k` on a 64-point log grid over `[0.05, 50]`, `delta` on a
/// 32-point grid over `[0.05, 4]`, followed by alternating golden-section
/// refinement of each coordinate within the neighbouring grid cells.
pub fn fit_envelope(profile: &RadialProfile, k: usize) -> Result<EnvelopeFit> {
    if k == 0 {
        return Err(Error::InvalidParameter("kernel scale must be >= 1".into()));
    }
    let points: Vec<(f64, f64)> = profile
        .samples
        .iter()
        .filter(|s| s.magnitude > 0.0)
        .map(|s| (s.radius, s.magnitude.ln()))
        .collect();
    if points.is_empty() {
        return Err(Error::DegenerateProfile);
    }
    if points.len() < 8 {
        return Err(Error::InvalidParameter(format!(
            "need at least 8 positive bins, got {}",
            points.len()
        )));
    }
    let kf = k as f64;
    // parametrized by ln(beta k) so the search is scale free
    let loss = |log_bk: f64, delta: f64| -> f64 {
        let bk = log_bk.exp();
        points
            .iter()
            .map(|&(r, log_m)| {
                let e = -(1.0 + delta) * (1.0 + bk * r).ln() - log_m;
                e * e
            })
            .sum()
    };

    let (lo, hi) = (BETA_K_RANGE.0.ln(), BETA_K_RANGE.1.ln());
    let beta_grid: Vec<f64> = (0..BETA_GRID)
        .map(|i| lo + (hi - lo) * i as f64 / (BETA_GRID - 1) as f64)
        .collect();
    let delta_grid: Vec<f64> = (0..DELTA_GRID)
        .map(|i| {
            DELTA_RANGE.0 + (DELTA_RANGE.1 - DELTA_RANGE.0) * i as f64 / (DELTA_GRID - 1) as f64
        })
        .collect();

    let mut best = (f64::INFINITY, 0usize, 0usize);
    for (i, &b) in beta_grid.iter().enumerate() {
        for (j, &d) in delta_grid.iter().enumerate() {
            let l = loss(b, d);
            if l < best.0 {
                best = (l, i, j);
            }
        }
    }
    let (_, bi, di) = best;
    let beta_bracket = (
        beta_grid[bi.saturating_sub(1)],
        beta_grid[(bi + 1).min(BETA_GRID - 1)],
    );
    let delta_bracket = (
        delta_grid[di.saturating_sub(1)],
        delta_grid[(di + 1).min(DELTA_GRID - 1)],
    );
    let (mut log_bk, mut delta) = (beta_grid[bi], delta_grid[di]);
    for _ in 0..REFINE_ROUNDS {
        log_bk = golden_min(|x| loss(x, delta), beta_bracket, log_bk);
        delta = golden_min(|x| loss(log_bk, x), delta_bracket, delta);
    }
    let fit_loss = loss(log_bk, delta);

    let mut beta = log_bk.exp() / kf;
    let dominates = |beta: f64| {
        profile
            .samples
            .iter()
            .all(|s| phi(beta, delta, kf, s.radius) >= s.magnitude)
    };
    let mut repair_steps = 0;
    while !dominates(beta) && repair_steps < REPAIR_STEPS {
        beta *= REPAIR_FACTOR;
        repair_steps += 1;
    }
    Ok(EnvelopeFit {
        beta,
        delta,
        k,
        fit_loss,
        dominated: dominates(beta),
        repair_steps,
    })
}

/// Golden-section minimum of `f` on `[a, b]`; keeps `current` if nothing
/// better is found.
fn golden_min(f: impl Fn(f64) -> f64, (mut a, mut b): (f64, f64), current: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERS {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = (a + b) / 2.0;
    if f(x) <= f(current) {
        x
    } else {
        current
    }
}

/// Result of checking `gamma(k) <= C / k^2` across kernel scales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Check {
    /// `max_k gamma(k) k^2`.
    pub constant: f64,
    pub holds: bool,
}

/// `C = max gamma(k) k^2`; the bound holds when `C` is finite, every fit is
/// dominated, and `gamma k^2` does not grow: the maximum over the larger
/// half of the scales is at most 1.05 times the maximum over the smaller
/// half.
pub fn theorem1_bound_check(fits: &[EnvelopeFit], gains: &[(usize, f64)]) -> Theorem1Check {
    let mut scaled: Vec<(usize, f64)> = gains
        .iter()
        .map(|&(k, g)| (k, g * (k * k) as f64))
        .collect();
    scaled.sort_by_key(|&(k, _)| k);
    scaled.dedup_by_key(|&mut (k, _)| k);
    let constant = scaled
        .iter()
        .map(|&(_, c)| c)
        .fold(f64::NEG_INFINITY, f64::max);
    if scaled.len() < 2 {
        return Theorem1Check {
            constant,
            holds: false,
        };
    }
    let mid = scaled.len() / 2;
    let max_of = |s: &[(usize, f64)]| s.iter().map(|&(_, c)| c).fold(f64::NEG_INFINITY, f64::max);
    let (lower, upper) = (max_of(&scaled[..mid]), max_of(&scaled[mid..]));
    let holds = constant.is_finite() && fits.iter().all(|f| f.dominated) && upper <= 1.05 * lower;
    Theorem1Check { constant, holds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stemgain::stem_gain_analytic;

    fn fit(beta: f64, delta: f64, k: usize) -> EnvelopeFit {
        EnvelopeFit {
            beta,
            delta,
            k,
            fit_loss: 0.0,
            dominated: true,
            repair_steps: 0,
        }
    }

    #[test]
    fn envelope_formula() {
        assert_eq!(envelope_value(&fit(0.3, 1.7, 9), 0.0), 1.0);
        assert_eq!(envelope_value(&fit(1.0, 1.0, 1), 1.0), 0.25);
        let f = fit(0.2, 0.8, 12);
        let mut prev = f.value(0.0);
        for i in 1..200 {
            let v = f.value(i as f64 * 0.02);
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn identity_profile_is_flat() {
        let p =
            radial_profile(&Kernel::identity(), 64, 2.0 * PI / 64.0, BinStatistic::Max).unwrap();
        assert!(!p.samples.is_empty());
        assert!(p.samples.iter().all(|s| (s.magnitude - 1.0).abs() < 1e-12));
        assert!(p.samples.iter().all(|s| s.radius > 0.0 && s.radius <= PI));
        assert!(p.samples.windows(2).all(|w| w[0].radius < w[1].radius));
    }

    #[test]
    fn identity_is_not_low_pass() {
        let p =
            radial_profile(&Kernel::identity(), 64, 2.0 * PI / 64.0, BinStatistic::Max).unwrap();
        let f = fit_envelope(&p, 1).unwrap();
        assert!(!f.dominated);
        assert!(f.beta > 0.0 && f.delta > 0.0);
    }

    #[test]
    fn box2_profile_matches_cosine_product() {
        // a 2x2 box has |K^(w)| = |cos(wx/2) cos(wy/2)|
        let n = 128;
        let bw = 2.0 * PI / n as f64;
        let p = radial_profile(&Kernel::boxed(2).unwrap(), n, bw, BinStatistic::Max).unwrap();
        let mut oracle = std::collections::BTreeMap::<usize, f64>::new();
        for a in 0..n {
            for b in 0..n {
                let wx = 2.0 * PI * (a as f64 - if a > n / 2 { n as f64 } else { 0.0 }) / n as f64;
                let wy = 2.0 * PI * (b as f64 - if b > n / 2 { n as f64 } else { 0.0 }) / n as f64;
                let m = ((wx / 2.0).cos() * (wy / 2.0).cos()).abs();
                let e = oracle.entry((wx.hypot(wy) / bw) as usize).or_insert(0.0);
                *e = e.max(m);
            }
        }
        for s in &p.samples {
            let want = oracle[&((s.radius / bw) as usize)];
            assert!((s.magnitude - want).abs() < 1e-12, "r={}", s.radius);
        }
        let low: Vec<_> = p.samples.iter().filter(|s| s.radius <= PI / 2.0).collect();
        assert!(low.len() > 8);
        assert!(low
            .windows(2)
            .all(|w| w[1].magnitude <= w[0].magnitude + 1e-12));
    }

    #[test]
    fn fitted_envelope_dominates_box_and_gaussian() {
        for kernel in [Kernel::boxed(8).unwrap(), Kernel::gaussian(8, 2.4).unwrap()] {
            for stat in [BinStatistic::Mean, BinStatistic::Max] {
                let p = radial_profile(&kernel, 128, 2.0 * PI / 128.0, stat).unwrap();
                let f = fit_envelope(&p, 8).unwrap();
                assert!(f.dominated, "{:?} {stat:?}", kernel.kind());
                assert!(p.samples.iter().all(|s| f.value(s.radius) >= s.magnitude));
            }
        }
    }

    #[test]
    fn degenerate_profile() {
        let p = RadialProfile {
            samples: (1..20)
                .map(|i| RadialSample {
                    radius: i as f64 * 0.1,
                    magnitude: 0.0,
                    count: 4,
                })
                .collect(),
            bin_width: 0.1,
            statistic: BinStatistic::Mean,
            grid_side: 64,
        };
        assert_eq!(fit_envelope(&p, 4).unwrap_err(), Error::DegenerateProfile);
    }

    #[test]
    fn theorem1_box_family() {
        let gains: Vec<_> = [4usize, 8, 16, 32]
            .iter()
            .map(|&k| (k, stem_gain_analytic(&Kernel::boxed(k).unwrap())))
            .collect();
        let check = theorem1_bound_check(&[fit(0.1, 1.0, 4)], &gains);
        assert!((check.constant - 1.0).abs() < 1e-12);
        assert!(check.holds);
    }

    #[test]
    fn theorem1_gaussian_family() {
        let gains: Vec<_> = [4usize, 8, 16]
            .iter()
            .map(|&k| {
                (
                    k,
                    stem_gain_analytic(&Kernel::gaussian(k, 0.3 * k as f64).unwrap()),
                )
            })
            .collect();
        let check = theorem1_bound_check(&[], &gains);
        assert!(check.holds && check.constant.is_finite(), "{check:?}");
    }

    #[test]
    fn theorem1_identity_family_fails() {
        let gains: Vec<_> = [1usize, 2, 4, 8].iter().map(|&k| (k, 1.0)).collect();
        assert!(!theorem1_bound_check(&[], &gains).holds);
        // a single scale cannot witness a rate
        assert!(!theorem1_bound_check(&[], &[(4, 0.0625)]).holds);
        // an undominated fit voids the check
        let mut f = fit(0.1, 1.0, 4);
        f.dominated = false;
        assert!(!theorem1_bound_check(&[f], &[(4, 0.0625), (8, 0.015625)]).holds);
    }
}
