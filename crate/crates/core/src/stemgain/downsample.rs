//! Anti-aliased downsampling `D_s`: prefilter with a `g x g` kernel, then
//! keep every `s`-th sample along each axis.

use super::{check_mc, GainEstimate, Kernel};
use crate::error::{Error, Result};
use crate::field::{white_noise, FieldGrid, SeedSpec};
use crate::montecarlo::run_trials;

#[derive(Debug, Clone, PartialEq)]
pub struct DownsampleOp {
    factor: usize,
    prefilter: Kernel,
    c1: f64,
    c2: f64,
}

impl DownsampleOp {
    /// Factor `s` with a normalized `s x s` box prefilter.
    pub fn new(factor: usize) -> Result<Self> {
        Self::with_prefilter(factor, Kernel::boxed(factor)?, 1.0, 1.0)
    }

    /// Arbitrary prefilter whose side `g` must satisfy `c1 s <= g <= c2 s`.
    pub fn with_prefilter(factor: usize, prefilter: Kernel, c1: f64, c2: f64) -> Result<Self> {
        if factor == 0 {
            return Err(Error::InvalidParameter(
                "downsampling factor must be >= 1".into(),
            ));
        }
        if !(c1 > 0.0 && c1 <= c2 && c2.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < c1 <= c2, got c1={c1}, c2={c2}"
            )));
        }
        let (g, s) = (prefilter.side() as f64, factor as f64);
        if g < c1 * s || g > c2 * s {
            return Err(Error::InvalidParameter(format!(
                "prefilter side {g} outside [{}, {}] for factor {factor}",
                c1 * s,
                c2 * s
            )));
        }
        Ok(Self {
            factor,
            prefilter,
            c1,
            c2,
        })
    }

    pub fn factor(&self) -> usize {
        self.factor
    }

    pub fn prefilter(&self) -> &Kernel {
        &self.prefilter
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.c1, self.c2)
    }

    fn check_grid(&self, height: usize, width: usize) -> Result<()> {
        let s = self.factor;
        if !height.is_multiple_of(s) || !width.is_multiple_of(s) {
            return Err(Error::IndivisibleSize {
                height,
                width,
                factor: s,
            });
        }
        let side = self.prefilter.side();
        if side > height.min(width) {
            return Err(Error::KernelTooLarge {
                side,
                height,
                width,
            });
        }
        Ok(())
    }
}

/// Periodic prefilter followed by keeping indices `= 0 (mod s)`. Only the
/// kept outputs of the convolution are evaluated.
pub fn downsample(f: &FieldGrid, op: &DownsampleOp) -> Result<FieldGrid> {
    let (h, w) = (f.height(), f.width());
    op.check_grid(h, w)?;
    let s = op.factor;
    let kernel = &op.prefilter;
    let k = kernel.side();
    let centre = k / 2;
    let (oh, ow) = (h / s, w / s);
    let mut out = Vec::with_capacity(oh * ow);
    for i in 0..oh {
        let r = i * s;
        for j in 0..ow {
            let c = j * s;
            let mut acc = 0.0;
            for a in 0..k {
                let rr = (r + centre + h - a) % h;
                for b in 0..k {
                    acc += kernel.weight(a, b) * f.get(rr, (c + centre + w - b) % w);
                }
            }
            out.push(acc);
        }
    }
    Ok(FieldGrid::from_raw(oh, ow, out))
}

/// `||K_g||_F^2`.
pub fn downsample_gain_analytic(op: &DownsampleOp) -> f64 {
    op.prefilter.frobenius_sq()
}

/// Trial `t` records `||D_s eta||^2 / (sigma^2 H W / s^2)` for
/// `eta = white_noise(.., SeedSpec(seed, t))`.
pub fn downsample_gain_monte_carlo(
    op: &DownsampleOp,
    height: usize,
    width: usize,
    sigma: f64,
    trials: usize,
    seed: u64,
) -> Result<GainEstimate> {
    check_mc(sigma, trials)?;
    op.check_grid(height, width)?;
    let s2 = (op.factor * op.factor) as f64;
    let norm = sigma * sigma * (height * width) as f64 / s2;
    let samples = run_trials(trials, |t| -> Result<f64> {
        let eta = white_noise(height, width, sigma, SeedSpec::new(seed, t))?;
        Ok(downsample(&eta, op)?.energy() / norm)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(GainEstimate::from_samples(&samples))
}

/// Resizing from `res_from` to `res_to` pixels per side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolutionRatio {
    pub factor: f64,
    /// `s^-2`, the fraction of noise energy kept.
    pub energy_ratio: f64,
    pub db: f64,
}

pub fn resolution_ratio(res_from: usize, res_to: usize) -> Result<ResolutionRatio> {
    if res_from == 0 || res_to == 0 {
        return Err(Error::InvalidParameter(format!(
            "resolutions must be positive, got {res_from} -> {res_to}"
        )));
    }
    let factor = res_from as f64 / res_to as f64;
    let energy_ratio = factor.powi(-2);
    Ok(ResolutionRatio {
        factor,
        energy_ratio,
        db: 10.0 * energy_ratio.log10(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::circular_convolve_direct;

    #[test]
    fn identity_factor_one() {
        let f = white_noise(8, 4, 1.0, SeedSpec::new(5, 0)).unwrap();
        let op = DownsampleOp::new(1).unwrap();
        assert_eq!(downsample(&f, &op).unwrap(), f);
    }

    #[test]
    fn constant_survives() {
        let f = FieldGrid::constant(8, 8, 2.5).unwrap();
        let g = downsample(&f, &DownsampleOp::new(2).unwrap()).unwrap();
        assert_eq!((g.height(), g.width()), (4, 4));
        assert!(g.data().iter().all(|v| (v - 2.5).abs() < 1e-12));
    }

    #[test]
    fn matches_filter_then_pick() {
        let f = white_noise(8, 8, 1.0, SeedSpec::new(6, 0)).unwrap();
        for op in [
            DownsampleOp::new(2).unwrap(),
            DownsampleOp::with_prefilter(2, Kernel::gaussian(3, 0.9).unwrap(), 1.0, 2.0).unwrap(),
        ] {
            let full = circular_convolve_direct(&f, op.prefilter()).unwrap();
            let d = downsample(&f, &op).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    assert_eq!(d.get(i, j), full.get(2 * i, 2 * j));
                }
            }
        }
    }

    #[test]
    fn validation() {
        let f = FieldGrid::zeros(9, 8).unwrap();
        assert_eq!(
            downsample(&f, &DownsampleOp::new(2).unwrap()).unwrap_err(),
            Error::IndivisibleSize {
                height: 9,
                width: 8,
                factor: 2
            }
        );
        assert!(DownsampleOp::new(0).is_err());
        assert!(DownsampleOp::with_prefilter(4, Kernel::boxed(2).unwrap(), 1.0, 1.0).is_err());
        assert!(DownsampleOp::with_prefilter(4, Kernel::boxed(6).unwrap(), 1.0, 2.0).is_ok());
    }

    #[test]
    fn analytic_gains() {
        assert_eq!(
            downsample_gain_analytic(&DownsampleOp::new(1).unwrap()),
            1.0
        );
        assert_eq!(
            downsample_gain_analytic(&DownsampleOp::new(2).unwrap()),
            0.25
        );
        let g3 = downsample_gain_analytic(&DownsampleOp::new(3).unwrap());
        assert!((g3 - 0.111111).abs() < 5e-7);
    }

    #[test]
    fn monte_carlo_small_grid() {
        let op = DownsampleOp::new(4).unwrap();
        let est = downsample_gain_monte_carlo(&op, 64, 64, 1.5, 40, 3).unwrap();
        assert!(est.within(0.0625, 3.0), "{est:?}");
        assert!(downsample_gain_monte_carlo(&op, 62, 64, 1.0, 4, 3).is_err());
    }

    #[test]
    fn resolution_examples() {
        let r = resolution_ratio(384, 224).unwrap();
        assert!((r.factor - 1.7142857).abs() < 1e-6);
        assert!((r.energy_ratio - 0.340).abs() < 1e-3);
        assert!((r.db + 4.7).abs() < 0.05);
        let one = resolution_ratio(224, 224).unwrap();
        assert_eq!((one.factor, one.energy_ratio, one.db), (1.0, 1.0, 0.0));
        let two = resolution_ratio(448, 224).unwrap();
        assert_eq!(two.energy_ratio, 0.25);
        assert!((two.db + 6.0206).abs() < 1e-4);
        assert!(resolution_ratio(0, 224).is_err());
    }
}
