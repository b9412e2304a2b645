use crate::error::{Error, Result};
use crate::field::FieldGrid;

/// Per-channel mean/std normalization `(x - mu) / sigma` for RGB inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct NormConstants {
    name: String,
    mean: [f64; 3],
    std: [f64; 3],
}

pub const PRESET_NAMES: [&str; 3] = ["OPENAI", "INCEPTION", "IMAGENET"];

impl NormConstants {
    pub fn new(name: impl Into<String>, mean: [f64; 3], std: [f64; 3]) -> Result<Self> {
        if let Some(i) = mean.iter().chain(&std).position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        if std.iter().any(|&s| s <= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "std components must be > 0, got {std:?}"
            )));
        }
        Ok(Self {
            name: name.into(),
            mean,
            std,
        })
    }

    /// `OPENAI`, `INCEPTION` or `IMAGENET` (case-insensitive).
    pub fn preset(name: &str) -> Result<Self> {
        let (mean, std) = match name.to_ascii_uppercase().as_str() {
            "OPENAI" => (
                [0.48145466, 0.4578275, 0.40821073],
                [0.26862954, 0.26130258, 0.27577711],
            ),
            "INCEPTION" => ([0.5; 3], [0.5; 3]),
            "IMAGENET" => ([0.485, 0.456, 0.406], [0.229, 0.224, 0.225]),
            _ => return Err(Error::UnknownPreset(name.to_string())),
        };
        Self::new(name.to_ascii_uppercase(), mean, std)
    }

    /// Zero mean, unit std.
    pub fn unit() -> Self {
        Self {
            name: "UNIT".into(),
            mean: [0.0; 3],
            std: [1.0; 3],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mean(&self) -> [f64; 3] {
        self.mean
    }

    pub fn std(&self) -> [f64; 3] {
        self.std
    }

    pub fn sigma_min(&self) -> f64 {
        self.std.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Applies `(x_c - mu_c) / sigma_c` to each of the three channel planes.
pub fn normalize(pixels: &[FieldGrid], c: &NormConstants) -> Result<Vec<FieldGrid>> {
    if pixels.len() != 3 {
        return Err(Error::ChannelMismatch(format!(
            "got {} channels",
            pixels.len()
        )));
    }
    let (h, w) = (pixels[0].height(), pixels[0].width());
    if pixels.iter().any(|p| p.height() != h || p.width() != w) {
        return Err(Error::ChannelMismatch(
            "channel planes differ in shape".into(),
        ));
    }
    Ok(pixels
        .iter()
        .enumerate()
        .map(|(ch, p)| {
            let (mu, sd) = (c.mean[ch], c.std[ch]);
            FieldGrid::from_raw(h, w, p.data().iter().map(|x| (x - mu) / sd).collect())
        })
        .collect())
}

/// `L_z / sigma_min`, the pixel-space Lipschitz bound of a backbone with
/// constant `L_z` behind normalization `c`.
pub fn lipschitz_bound(l_z: f64, c: &NormConstants) -> Result<f64> {
    if !(l_z > 0.0) || !l_z.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "L_z must be > 0, got {l_z}"
        )));
    }
    Ok(l_z / c.sigma_min())
}

/// `sigma_min(b) / sigma_min(a)`: how much larger `a`'s bound is than `b`'s.
pub fn sensitivity_ratio(a: &NormConstants, b: &NormConstants) -> f64 {
    b.sigma_min() / a.sigma_min()
}
