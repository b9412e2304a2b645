use thiserror::Error;

/// Every failure the toolkit can report.
///
/// Variant names double as the machine-readable error names printed by the
/// command-line frontend, see [`Error::name`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid {height}x{width} is not a power of two along both axes")]
    NonPowerOfTwoSize { height: usize, width: usize },

    #[error("spectrum is not conjugate symmetric (max deviation {deviation:e})")]
    AsymmetricSpectrum { deviation: f64 },

    #[error("field has zero energy")]
    ZeroField,

    #[error("kernel side {side} exceeds grid {height}x{width}")]
    KernelTooLarge {
        side: usize,
        height: usize,
        width: usize,
    },

    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },

    #[error("grid {height}x{width} is not divisible by factor {factor}")]
    IndivisibleSize {
        height: usize,
        width: usize,
        factor: usize,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("radial profile has no positive magnitude beyond DC")]
    DegenerateProfile,

    #[error("Newton iteration did not converge for root {root} of order {order}")]
    ConvergenceFailure { order: usize, root: usize },

    #[error("negative count {0}")]
    NegativeCount(f64),

    #[error("median recovery needs an odd window, got {0}")]
    EvenWindow(usize),

    #[error("unknown normalization preset {0:?}")]
    UnknownPreset(String),

    #[error("expected 3 channels of equal shape: {0}")]
    ChannelMismatch(String),

    #[error("map dimension {0} is not divisible into 3 channel blocks")]
    LayoutMismatch(usize),

    #[error("power iteration did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("measured norm {measured} exceeds bound {bound}")]
    BoundViolated { measured: f64, bound: f64 },

    #[error("duplicate model id {0:?}")]
    DuplicateModelId(String),

    #[error("model {0:?} needs at least two severity samples including tau=0")]
    InsufficientSamples(String),

    #[error("malformed table: {0}")]
    MalformedTable(String),
}

impl Error {
    /// Stable identifier of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonPowerOfTwoSize { .. } => "NonPowerOfTwoSize",
            Error::AsymmetricSpectrum { .. } => "AsymmetricSpectrum",
            Error::ZeroField => "ZeroField",
            Error::KernelTooLarge { .. } => "KernelTooLarge",
            Error::InvalidRange { .. } => "InvalidRange",
            Error::IndivisibleSize { .. } => "IndivisibleSize",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::NonFinite(_) => "NonFinite",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::DegenerateProfile => "DegenerateProfile",
            Error::ConvergenceFailure { .. } => "ConvergenceFailure",
            Error::NegativeCount(_) => "NegativeCount",
            Error::EvenWindow(_) => "EvenWindow",
            Error::UnknownPreset(_) => "UnknownPreset",
            Error::ChannelMismatch(_) => "ChannelMismatch",
            Error::LayoutMismatch(_) => "LayoutMismatch",
            Error::NoConvergence(_) => "NoConvergence",
            Error::BoundViolated { .. } => "BoundViolated",
            Error::DuplicateModelId(_) => "DuplicateModelId",
            Error::InsufficientSamples(_) => "InsufficientSamples",
            Error::MalformedTable(_) => "MalformedTable",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
