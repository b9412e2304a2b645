//! Iterative radix-2 Cooley-Tukey transforms.
//!
//! Convention: the forward transform is unnormalized,
//! `X(a, b) = sum_{r, c} x(r, c) exp(-2 pi i (a r / H + b c / W))`, and the
//! inverse carries the `1 / (H W)` factor. Under this convention
//! `(1 / HW) sum |X|^2 = sum |x|^2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::FieldGrid;
use crate::error::{Error, Result};

/// Complex DFT coefficients of an `height x width` grid, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    height: usize,
    width: usize,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(height: usize, width: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if height == 0 || width == 0 || coeffs.len() != height * width {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficients for a {height}x{width} spectrum",
                coeffs.len()
            )));
        }
        Ok(Self {
            height,
            width,
            coeffs,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> Complex64 {
        self.coeffs[a * self.width + b]
    }

    /// Largest `|X(a, b) - conj(X(-a, -b))|` over the grid.
    pub fn conjugate_asymmetry(&self) -> f64 {
        let (h, w) = (self.height, self.width);
        let mut worst = 0.0f64;
        for a in 0..h {
            for b in 0..w {
                let mirror = self.get((h - a) % h, (w - b) % w).conj();
                worst = worst.max((self.get(a, b) - mirror).norm());
            }
        }
        worst
    }

    /// Mean squared magnitude `(1 / HW) sum |X|^2`.
    pub fn mean_power(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() / self.coeffs.len() as f64
    }
}

/// Precomputed 1D radix-2 transform of a fixed length.
#[derive(Debug, Clone)]
struct Radix2 {
    n: usize,
    twiddles: Vec<Complex64>,
    bitrev: Vec<usize>,
}

impl Radix2 {
    fn new(n: usize) -> Self {
        debug_assert!(n.is_power_of_two());
        let bits = n.trailing_zeros();
        let twiddles = (0..n / 2)
            .map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64))
            .collect();
        let bitrev = (0..n)
            .map(|i| {
                if bits == 0 {
                    0
                } else {
                    i.reverse_bits() >> (usize::BITS - bits)
                }
            })
            .collect();
        Self {
            n,
            twiddles,
            bitrev,
        }
    }

    fn process(&self, buf: &mut [Complex64], inverse: bool) {
        let n = self.n;
        for i in 0..n {
            let j = self.bitrev[i];
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let step = n / len;
            for start in (0..n).step_by(len) {
                for j in 0..half {
                    let mut w = self.twiddles[j * step];
                    if inverse {
                        w = w.conj();
                    }
                    let u = buf[start + j];
                    let v = buf[start + j + half] * w;
                    buf[start + j] = u + v;
                    buf[start + j + half] = u - v;
                }
            }
            len <<= 1;
        }
    }
}

/// Reusable 2D transform for one grid shape.
#[derive(Debug, Clone)]
pub struct Fft2Plan {
    height: usize,
    width: usize,
    rows: Radix2,
    cols: Radix2,
}

impl Fft2Plan {
    pub fn new(height: usize, width: usize) -> Result<Self> {
        if height == 0 || width == 0 || !height.is_power_of_two() || !width.is_power_of_two() {
            return Err(Error::NonPowerOfTwoSize { height, width });
        }
        Ok(Self {
            height,
            width,
            rows: Radix2::new(width),
            cols: Radix2::new(height),
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// In-place unnormalized forward transform of a row-major buffer.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.run(buf, false);
    }

    /// In-place inverse transform including the `1 / HW` factor.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.run(buf, true);
        let scale = 1.0 / (self.height * self.width) as f64;
        for c in buf.iter_mut() {
            *c *= scale;
        }
    }

    fn run(&self, buf: &mut [Complex64], inverse: bool) {
        let (h, w) = (self.height, self.width);
        assert_eq!(buf.len(), h * w, "buffer does not match plan shape");
        for row in buf.chunks_exact_mut(w) {
            self.rows.process(row, inverse);
        }
        if h == 1 {
            return;
        }
        let mut col = vec![Complex64::new(0.0, 0.0); h];
        for c in 0..w {
            for r in 0..h {
                col[r] = buf[r * w + c];
            }
            self.cols.process(&mut col, inverse);
            for r in 0..h {
                buf[r * w + c] = col[r];
            }
        }
    }

    /// Forward transform of a real field.
    pub fn forward_real(&self, f: &FieldGrid) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = f.data().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward(&mut buf);
        buf
    }
}

/// Unnormalized forward DFT of a power-of-two grid.
pub fn fft2(f: &FieldGrid) -> Result<Spectrum> {
    let plan = Fft2Plan::new(f.height(), f.width())?;
    Ok(Spectrum {
        height: f.height(),
        width: f.width(),
        coeffs: plan.forward_real(f),
    })
}

/// Inverse DFT of a conjugate-symmetric spectrum; the imaginary residue is
/// dropped.
pub fn ifft2(s: &Spectrum) -> Result<FieldGrid> {
    let plan = Fft2Plan::new(s.height, s.width)?;
    let scale = s.coeffs.iter().map(|c| c.norm()).fold(1.0f64, f64::max);
    let deviation = s.conjugate_asymmetry();
    if !(deviation <= 1e-8 * scale) {
        return Err(Error::AsymmetricSpectrum { deviation });
    }
    let mut buf = s.coeffs.clone();
    plan.inverse(&mut buf);
    let data = buf.into_iter().map(|c| c.re).collect();
    FieldGrid::new(s.height, s.width, data)
}

/// Ratio of spectral energy `(1 / HW) sum |X|^2` to spatial energy; equals 1
/// under the transform convention used here.
pub fn parseval_check(f: &FieldGrid) -> Result<f64> {
    let spatial = f.energy();
    if spatial == 0.0 {
        return Err(Error::ZeroField);
    }
    Ok(fft2(f)?.mean_power() / spatial)
}
