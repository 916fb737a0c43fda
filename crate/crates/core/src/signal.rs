//! Sampled signals on `[0, 1]` and probability densities.

use std::ops::Deref;

use crate::error::{Error, Result};

/// Tolerance on the unit discrete mass of a [`Density`].
pub const DENSITY_MASS_TOLERANCE: f64 = 1e-12;

/// `n >= 1` finite samples of a function on `[0, 1]`.
///
/// Sample `j` (1-based) sits at `x = j / n`: the grid holds right endpoints
/// and has no sample at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    values: Vec<f64>,
}

impl Signal {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySignal);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Signal { values })
    }

    /// Samples `f(j/n)` for `j = 1..=n`.
    pub fn sample<F: Fn(f64) -> f64>(f: F, n: usize) -> Result<Self> {
        let nf = n as f64;
        Signal::new((1..=n).map(|j| f(j as f64 / nf)).collect())
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Signal::new(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Position `j/n` of the sample at 0-based index `i`.
    pub fn position(&self, i: usize) -> f64 {
        (i + 1) as f64 / self.len() as f64
    }

    /// Discrete integral `(1/n) Σ x_j`.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// Pointwise `self - other`.
    pub fn sub(&self, other: &Signal) -> Result<Signal> {
        check_lengths(self, other)?;
        Signal::new(self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect())
    }

    /// Pointwise `self + other`.
    pub fn add(&self, other: &Signal) -> Result<Signal> {
        check_lengths(self, other)?;
        Signal::new(self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, c: f64) -> Result<Signal> {
        Signal::new(self.values.iter().map(|v| c * v).collect())
    }
}

impl Deref for Signal {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.values
    }
}

pub(crate) fn check_lengths(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    Ok(())
}

/// A nonnegative signal with unit discrete integral `(1/n) Σ P_j = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    signal: Signal,
}

impl Density {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let signal = Signal::new(values)?;
        check_nonnegative(&signal)?;
        let mass = signal.integral();
        if (mass - 1.0).abs() > DENSITY_MASS_TOLERANCE {
            return Err(Error::DensityMass { mass, tolerance: DENSITY_MASS_TOLERANCE });
        }
        Ok(Density { signal })
    }

    /// Divides by the discrete mass so the result integrates to one.
    pub fn renormalized(values: Vec<f64>) -> Result<Self> {
        let signal = Signal::new(values)?;
        check_nonnegative(&signal)?;
        let mass = signal.integral();
        if mass <= 0.0 {
            return Err(Error::ZeroMass);
        }
        Density::new(signal.values.iter().map(|v| v / mass).collect())
    }

    pub fn from_signal(signal: Signal) -> Result<Self> {
        Density::new(signal.into_values())
    }

    /// A unit atom: value `n` at 0-based `index`, zero elsewhere.
    pub fn point_mass(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return Err(Error::LengthMismatch { left: n, right: index + 1 });
        }
        let mut values = vec![0.0; n];
        values[index] = n as f64;
        Density::new(values)
    }

    pub fn signal(&self) -> &Signal {
        &self.signal
    }

    pub fn into_signal(self) -> Signal {
        self.signal
    }
}

impl Deref for Density {
    type Target = Signal;

    fn deref(&self) -> &Signal {
        &self.signal
    }
}

fn check_nonnegative(signal: &Signal) -> Result<()> {
    match signal.iter().enumerate().find(|(_, v)| **v < 0.0) {
        Some((index, &value)) => Err(Error::NegativeDensity { index, value }),
        None => Ok(()),
    }
}
