//! Real 2D sample grids, their spectra, periodic convolution and the
//! deterministic Gaussian noise source.

mod conv;
mod fft;
mod noise;

pub(crate) use conv::embed_kernel;
pub use conv::{circular_convolve, circular_convolve_direct, Convolver};
pub use fft::{fft2, ifft2, parseval_check, Fft2Plan, Spectrum};
pub use noise::{inject_image_noise, purpose_seed, white_noise, NoiseStream, SeedSpec};

use crate::error::{Error, Result};

/// An `height x width` grid of finite reals stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    height: usize,
    width: usize,
    data: Vec<f64>,
}

impl FieldGrid {
    pub fn new(height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        check_dims(height, width)?;
        if data.len() != height * width {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a {height}x{width} grid",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self {
            height,
            width,
            data,
        })
    }

    pub fn zeros(height: usize, width: usize) -> Result<Self> {
        Self::constant(height, width, 0.0)
    }

    pub fn constant(height: usize, width: usize, value: f64) -> Result<Self> {
        Self::new(height, width, vec![value; height * width])
    }

    /// Builds a grid from `f(row, col)`.
    pub fn from_fn(height: usize, width: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        check_dims(height, width)?;
        let data = (0..height * width)
            .map(|i| f(i / width, i % width))
            .collect();
        Self::new(height, width, data)
    }

    /// Unit impulse at the origin.
    pub fn delta(height: usize, width: usize) -> Result<Self> {
        Self::from_fn(
            height,
            width,
            |r, c| if r == 0 && c == 0 { 1.0 } else { 0.0 },
        )
    }

    /// Internal constructor for values already known to be finite.
    pub(crate) fn from_raw(height: usize, width: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), height * width);
        Self {
            height,
            width,
            data,
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.width + col]
    }

    /// Sum of squared samples.
    pub fn energy(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    /// `alpha * self + beta * other`.
    pub fn axpby(&self, alpha: f64, other: &FieldGrid, beta: f64) -> Result<FieldGrid> {
        self.same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        FieldGrid::new(self.height, self.width, data)
    }

    pub(crate) fn same_shape(&self, other: &FieldGrid) -> Result<()> {
        if self.height != other.height || self.width != other.width {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.height, self.width, other.height, other.width
            )));
        }
        Ok(())
    }
}

fn check_dims(height: usize, width: usize) -> Result<()> {
    if height == 0 || width == 0 {
        return Err(Error::InvalidParameter(format!(
            "grid dimensions must be positive, got {height}x{width}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(
            FieldGrid::new(0, 3, vec![]),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            FieldGrid::new(2, 2, vec![0.0; 3]),
            Err(Error::ShapeMismatch(_))
        ));
        assert_eq!(
            FieldGrid::new(1, 2, vec![0.0, f64::NAN]),
            Err(Error::NonFinite(1))
        );
    }

    #[test]
    fn from_fn_is_row_major() {
        let g = FieldGrid::from_fn(2, 3, |r, c| (10 * r + c) as f64).unwrap();
        assert_eq!(g.data(), &[0.0, 1.0, 2.0, 10.0, 11.0, 12.0]);
        assert_eq!(g.get(1, 2), 12.0);
    }
}
