//! Named test signals on `[0, 1]`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{splitmix64, unit_f64};
use crate::signal::Signal;

/// A hat function of the given height, zero outside `center ± half_width`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    pub center: f64,
    pub half_width: f64,
    pub height: f64,
}

impl Triangle {
    pub const fn new(center: f64, half_width: f64, height: f64) -> Self {
        Triangle { center, half_width, height }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let r = (x - self.center).abs() / self.half_width;
        if r < 1.0 {
            self.height * (1.0 - r)
        } else {
            0.0
        }
    }

    pub fn slope(&self) -> f64 {
        self.height.abs() / self.half_width
    }

    pub fn mass(&self) -> f64 {
        self.height * self.half_width
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.half_width, self.center + self.half_width)
    }
}

/// Support `[0, 0.4]`, so shifts up to 0.6 stay inside the unit interval.
pub const TRIANGLE: Triangle = Triangle::new(0.2, 0.2, 1.0);
/// Subtracted from [`TRIANGLE`] to form the `triangle-diff` signal.
pub const SECOND_TRIANGLE: Triangle = Triangle::new(0.65, 0.25, 0.6);

pub const SPIKE_COUNT: usize = 12;
pub const SPIKE_HALF_WIDTH: f64 = 0.01;
const SPIKE_SEED: u64 = 0x5EED_5B1C_E000_0012;

fn spikes() -> impl Iterator<Item = Triangle> {
    let mut state = SPIKE_SEED;
    (0..SPIKE_COUNT).map(move |i| {
        state = splitmix64(state);
        let height = 0.2 + 0.8 * unit_f64(state);
        Triangle::new(0.02 + 0.03 * i as f64, SPIKE_HALF_WIDTH, height)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CatalogueSignal {
    /// [`TRIANGLE`].
    Triangle,
    /// [`TRIANGLE`] minus [`SECOND_TRIANGLE`].
    TriangleDiff,
    /// Twelve narrow spikes with pseudo-random heights on `[0.01, 0.36]`.
    Spiked,
}

impl CatalogueSignal {
    pub const ALL: [CatalogueSignal; 3] =
        [CatalogueSignal::Triangle, CatalogueSignal::TriangleDiff, CatalogueSignal::Spiked];

    pub fn name(self) -> &'static str {
        match self {
            CatalogueSignal::Triangle => "triangle",
            CatalogueSignal::TriangleDiff => "triangle-diff",
            CatalogueSignal::Spiked => "spiked",
        }
    }

    pub fn eval(self, x: f64) -> f64 {
        match self {
            CatalogueSignal::Triangle => TRIANGLE.eval(x),
            CatalogueSignal::TriangleDiff => TRIANGLE.eval(x) - SECOND_TRIANGLE.eval(x),
            CatalogueSignal::Spiked => spikes().map(|t| t.eval(x)).sum(),
        }
    }

    /// `L` with `|f| <= L` and `|f(x) - f(y)| <= L |x - y|`.
    pub fn lipschitz(self) -> f64 {
        match self {
            CatalogueSignal::Triangle => TRIANGLE.slope().max(TRIANGLE.height),
            // The two supports are disjoint.
            CatalogueSignal::TriangleDiff => TRIANGLE.slope().max(SECOND_TRIANGLE.slope()),
            CatalogueSignal::Spiked => 1.0 / SPIKE_HALF_WIDTH,
        }
    }

    /// Closed interval outside which the signal vanishes.
    pub fn support(self) -> (f64, f64) {
        match self {
            CatalogueSignal::Triangle => TRIANGLE.support(),
            CatalogueSignal::TriangleDiff => (TRIANGLE.support().0, SECOND_TRIANGLE.support().1),
            CatalogueSignal::Spiked => {
                let (lo, hi) =
                    spikes().fold((f64::MAX, f64::MIN), |(lo, hi), t| (lo.min(t.support().0), hi.max(t.support().1)));
                (lo, hi)
            }
        }
    }

    pub fn sample(self, n: usize) -> Result<Signal> {
        if self == CatalogueSignal::Spiked {
            let spikes: Vec<Triangle> = spikes().collect();
            return Signal::sample(|x| spikes.iter().map(|t| t.eval(x)).sum(), n);
        }
        Signal::sample(|x| self.eval(x), n)
    }
}

impl fmt::Display for CatalogueSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CatalogueSignal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CatalogueSignal::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| Error::UnknownSignal(s.to_string()))
    }
}
