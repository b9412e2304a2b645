use crate::error::{Error, Result};

/// How a kernel was constructed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelKind {
    Box,
    Gaussian { width: f64 },
    Custom,
}

/// A square `side x side` filter, weights row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    side: usize,
    weights: Vec<f64>,
    kind: KernelKind,
}

impl Kernel {
    /// Normalized box filter: every weight is `1 / k^2`.
    pub fn boxed(k: usize) -> Result<Self> {
        check_side(k)?;
        let w = 1.0 / (k * k) as f64;
        Ok(Self {
            side: k,
            weights: vec![w; k * k],
            kind: KernelKind::Box,
        })
    }

    /// The 1x1 unit kernel.
    pub fn identity() -> Self {
        Self {
            side: 1,
            weights: vec![1.0],
            kind: KernelKind::Box,
        }
    }

    /// Samples `exp(-(x^2 + y^2) / (2 width^2))` at offsets `x, y` from the
    /// kernel centre `(k - 1) / 2`, normalized to unit sum.
    pub fn gaussian(k: usize, width: f64) -> Result<Self> {
        check_side(k)?;
        if !(width > 0.0) || !width.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gaussian width must be > 0, got {width}"
            )));
        }
        let centre = (k as f64 - 1.0) / 2.0;
        let denom = 2.0 * width * width;
        let mut weights: Vec<f64> = (0..k * k)
            .map(|i| {
                let x = (i / k) as f64 - centre;
                let y = (i % k) as f64 - centre;
                (-(x * x + y * y) / denom).exp()
            })
            .collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        Ok(Self {
            side: k,
            weights,
            kind: KernelKind::Gaussian { width },
        })
    }

    pub fn custom(side: usize, weights: Vec<f64>) -> Result<Self> {
        check_side(side)?;
        if weights.len() != side * side {
            return Err(Error::ShapeMismatch(format!(
                "{} weights for a {side}x{side} kernel",
                weights.len()
            )));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self {
            side,
            weights,
            kind: KernelKind::Custom,
        })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn weight(&self, row: usize, col: usize) -> f64 {
        self.weights[row * self.side + col]
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Squared Frobenius norm; exactly `1 / k^2` for a box.
    pub fn frobenius_sq(&self) -> f64 {
        if self.kind == KernelKind::Box {
            return 1.0 / (self.side * self.side) as f64;
        }
        self.weights.iter().map(|w| w * w).sum()
    }
}

fn check_side(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("kernel side must be >= 1".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_weights() {
        assert_eq!(Kernel::boxed(1).unwrap().weights(), &[1.0]);
        assert_eq!(Kernel::boxed(2).unwrap().weights(), &[0.25; 4]);
        assert_eq!(Kernel::boxed(4).unwrap().frobenius_sq(), 0.0625);
        assert!(Kernel::boxed(0).is_err());
    }

    #[test]
    fn gaussian_normalized_and_flat_limit() {
        assert_eq!(Kernel::gaussian(1, 0.3).unwrap().weights(), &[1.0]);
        for k in 1..12 {
            let g = Kernel::gaussian(k, 0.7 + k as f64 * 0.1).unwrap();
            assert!((g.sum() - 1.0).abs() < 1e-12);
        }
        let wide = Kernel::gaussian(3, 1e8).unwrap();
        assert!(wide.weights().iter().all(|w| (w - 1.0 / 9.0).abs() < 1e-12));
        assert!(Kernel::gaussian(3, 0.0).is_err());
    }

    #[test]
    fn gaussian_frobenius_matches_direct_sum() {
        // independent evaluation with integer offsets -2..=2
        let mut raw = Vec::new();
        for x in -2i32..=2 {
            for y in -2i32..=2 {
                raw.push((-((x * x + y * y) as f64) / 2.0).exp());
            }
        }
        let total: f64 = raw.iter().sum();
        let expected: f64 = raw.iter().map(|v| (v / total).powi(2)).sum();
        let g = Kernel::gaussian(5, 1.0).unwrap();
        assert!((g.frobenius_sq() - expected).abs() < 1e-12);
    }

    #[test]
    fn custom_validates() {
        assert!(Kernel::custom(2, vec![1.0; 3]).is_err());
        assert!(Kernel::custom(1, vec![f64::INFINITY]).is_err());
        assert_eq!(
            Kernel::custom(1, vec![-2.0]).unwrap().kind(),
            KernelKind::Custom
        );
    }
}
