//! Periodic (circular) convolution with a centred kernel.
//!
//! Embedding: tap `(a, b)` of a side-`k` kernel sits at grid offset
//! `(a - k/2, b - k/2)` modulo the grid, with `k/2` rounded down. The output
//! is `(K * f)(p) = sum_q K_emb(q) f(p - q)`.

use num_complex::Complex64;

use super::{Fft2Plan, FieldGrid};
use crate::error::{Error, Result};
use crate::stemgain::Kernel;

/// Kernel prepared for repeated convolution on one grid shape.
#[derive(Debug, Clone)]
pub struct Convolver {
    kernel: Kernel,
    height: usize,
    width: usize,
    spectral: Option<(Fft2Plan, Vec<Complex64>)>,
}

impl Convolver {
    pub fn new(kernel: &Kernel, height: usize, width: usize) -> Result<Self> {
        let side = kernel.side();
        if side > height.min(width) {
            return Err(Error::KernelTooLarge {
                side,
                height,
                width,
            });
        }
        let spectral = match Fft2Plan::new(height, width) {
            Ok(plan) => {
                let mut transfer = embed_kernel(kernel, height, width);
                plan.forward(&mut transfer);
                Some((plan, transfer))
            }
            Err(_) => None,
        };
        Ok(Self {
            kernel: kernel.clone(),
            height,
            width,
            spectral,
        })
    }

    /// Transfer function on the DFT grid, when the grid admits an FFT.
    pub fn transfer(&self) -> Option<&[Complex64]> {
        self.spectral.as_ref().map(|(_, t)| t.as_slice())
    }

    pub fn apply(&self, f: &FieldGrid) -> Result<FieldGrid> {
        if f.height() != self.height || f.width() != self.width {
            return Err(Error::ShapeMismatch(format!(
                "convolver built for {}x{}, field is {}x{}",
                self.height,
                self.width,
                f.height(),
                f.width()
            )));
        }
        match &self.spectral {
            Some((plan, transfer)) => {
                let mut buf = plan.forward_real(f);
                for (x, t) in buf.iter_mut().zip(transfer) {
                    *x *= t;
                }
                plan.inverse(&mut buf);
                Ok(FieldGrid::from_raw(
                    self.height,
                    self.width,
                    buf.into_iter().map(|c| c.re).collect(),
                ))
            }
            None => Ok(direct(f, &self.kernel)),
        }
    }
}

/// Kernel placed on an `height x width` complex buffer, centred at the origin.
pub(crate) fn embed_kernel(kernel: &Kernel, height: usize, width: usize) -> Vec<Complex64> {
    let k = kernel.side();
    let centre = k / 2;
    let mut buf = vec![Complex64::new(0.0, 0.0); height * width];
    for a in 0..k {
        let r = (a + height - centre) % height;
        for b in 0..k {
            let c = (b + width - centre) % width;
            buf[r * width + c].re += kernel.weight(a, b);
        }
    }
    buf
}

fn direct(f: &FieldGrid, kernel: &Kernel) -> FieldGrid {
    let (h, w) = (f.height(), f.width());
    let k = kernel.side();
    let centre = k / 2;
    let mut out = vec![0.0; h * w];
    for r in 0..h {
        for c in 0..w {
            let mut acc = 0.0;
            for a in 0..k {
                // f(p - q) with q = a - centre
                let rr = (r + centre + h - a) % h;
                for b in 0..k {
                    let cc = (c + centre + w - b) % w;
                    acc += kernel.weight(a, b) * f.get(rr, cc);
                }
            }
            out[r * w + c] = acc;
        }
    }
    FieldGrid::from_raw(h, w, out)
}

/// `K * f` with periodic boundary; FFT-based on power-of-two grids and a
/// direct sum otherwise.
pub fn circular_convolve(f: &FieldGrid, kernel: &Kernel) -> Result<FieldGrid> {
    Convolver::new(kernel, f.height(), f.width())?.apply(f)
}

/// `K * f` by the O(H W k^2) spatial sum, for any grid shape.
pub fn circular_convolve_direct(f: &FieldGrid, kernel: &Kernel) -> Result<FieldGrid> {
    let side = kernel.side();
    if side > f.height().min(f.width()) {
        return Err(Error::KernelTooLarge {
            side,
            height: f.height(),
            width: f.width(),
        });
    }
    Ok(direct(f, kernel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{white_noise, SeedSpec};

    /// Convolution straight from the definition, independent of the
    /// index arithmetic above.
    fn oracle(f: &FieldGrid, kernel: &Kernel) -> Vec<f64> {
        let (h, w) = (f.height() as i64, f.width() as i64);
        let k = kernel.side() as i64;
        let centre = k / 2;
        let mut out = vec![0.0; (h * w) as usize];
        for r in 0..h {
            for c in 0..w {
                let mut acc = 0.0;
                for a in 0..k {
                    for b in 0..k {
                        let qr = a - centre;
                        let qc = b - centre;
                        let rr = (r - qr).rem_euclid(h) as usize;
                        let cc = (c - qc).rem_euclid(w) as usize;
                        acc += kernel.weight(a as usize, b as usize) * f.get(rr, cc);
                    }
                }
                out[(r * w + c) as usize] = acc;
            }
        }
        out
    }

    #[test]
    fn identity_kernel_is_noop() {
        let f = white_noise(16, 8, 1.0, SeedSpec::new(1, 0)).unwrap();
        let g = circular_convolve(&f, &Kernel::identity()).unwrap();
        for (a, b) in f.data().iter().zip(g.data()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn box_preserves_constant() {
        let f = FieldGrid::constant(8, 8, 3.5).unwrap();
        let g = circular_convolve(&f, &Kernel::boxed(2).unwrap()).unwrap();
        assert!(g.data().iter().all(|v| (v - 3.5).abs() < 1e-12));
    }

    #[test]
    fn fft_path_matches_oracle() {
        let f = white_noise(16, 16, 1.0, SeedSpec::new(2, 0)).unwrap();
        let weights: Vec<f64> = (0..16).map(|i| (i as f64 * 0.7).sin()).collect();
        for kernel in [
            Kernel::boxed(3).unwrap(),
            Kernel::gaussian(5, 1.3).unwrap(),
            Kernel::custom(4, weights).unwrap(),
        ] {
            let fast = circular_convolve(&f, &kernel).unwrap();
            let slow = oracle(&f, &kernel);
            let scale = slow.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for (a, b) in fast.data().iter().zip(&slow) {
                assert!((a - b).abs() <= 1e-9 * scale);
            }
        }
    }

    #[test]
    fn direct_path_on_odd_grid() {
        let f = white_noise(9, 6, 1.0, SeedSpec::new(3, 0)).unwrap();
        let kernel = Kernel::gaussian(4, 0.8).unwrap();
        let g = circular_convolve(&f, &kernel).unwrap();
        let o = oracle(&f, &kernel);
        for (a, b) in g.data().iter().zip(&o) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn kernel_too_large() {
        let f = FieldGrid::zeros(4, 8).unwrap();
        assert_eq!(
            circular_convolve(&f, &Kernel::boxed(5).unwrap()).unwrap_err(),
            Error::KernelTooLarge {
                side: 5,
                height: 4,
                width: 8
            }
        );
    }
}
