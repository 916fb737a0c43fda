use thiserror::Error;

/// Errors produced by the `volterra` crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("signal must contain at least one sample")]
    EmptySignal,

    #[error("sample {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },

    #[error("invalid exponent {0}: finite exponents must satisfy p >= 1")]
    InvalidExponent(f64),

    #[error("could not parse exponent {0:?}: expected a real number >= 1 or \"inf\"")]
    ExponentSyntax(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("density has negative value {value} at index {index}")]
    NegativeDensity { index: usize, value: f64 },

    #[error("density has discrete mass {mass}, expected 1 within {tolerance:e}")]
    DensityMass { mass: f64, tolerance: f64 },

    #[error("cannot renormalize a signal with zero mass")]
    ZeroMass,

    #[error("dual certificate requires a nonzero Volterra norm")]
    ZeroNorm,

    #[error("shift by {shift} samples would clip nonzero mass at index {index}")]
    ShiftOverflow { shift: isize, index: usize },

    #[error("warp is not strictly increasing near x = {x}")]
    NonMonotoneWarp { x: f64 },

    #[error("warp maps {x} to {image}, outside [0, 1]")]
    WarpRange { x: f64, image: f64 },

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("grid sizes must be strictly increasing and positive")]
    InvalidLevels,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error(
        "grid has mass outside the unit disc: max |F| there is {outside:e}, \
         tolerance allows {allowed:e}"
    )]
    SupportViolation { outside: f64, allowed: f64 },

    #[error("unknown catalogue signal {0:?}")]
    UnknownSignal(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
