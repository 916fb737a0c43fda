//! Domain warps, range rescalings and shifts of sampled signals.
//!
//! A [`Warp`] bundles an increasing change of variables `ψ: I → [0, 1]` with a
//! rescaling `ρ` on `ψ(I)`; applied to `f` it produces
//! `f_{ψ,ρ}(x) = f(ψ⁻¹(x)) ρ(x)` on `ψ(I)` and zero elsewhere. The size of the
//! perturbation is
//!
//! ```text
//! ε = max_I |x - ψ(x)| + max_I |1 - ρ(ψ(x)) ψ'(x)|
//! ```
//!
//! and the Volterra distance between `f` and its warp is at most `ε ‖f‖_p`.

use crate::error::{Error, Result};
use crate::signal::Signal;

type RealFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Points used to check monotonicity when a warp is constructed.
pub const MONOTONE_CHECK_POINTS: usize = 4097;
/// Default grid size for [`epsilon_of`].
pub const DEFAULT_EPSILON_RESOLUTION: usize = 10_000;
const INVERSE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo < hi && hi <= 1.0) {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    /// `points` equispaced values from `lo` to `hi` inclusive.
    pub fn grid(&self, points: usize) -> impl Iterator<Item = f64> + '_ {
        let steps = points.max(2) - 1;
        (0..=steps).map(move |i| if i == steps { self.hi } else { self.lo + self.len() * i as f64 / steps as f64 })
    }
}

enum Rescale {
    Function(RealFn),
    /// `ρ = (ψ⁻¹)'`, which keeps `∫ f` unchanged.
    InverseDerivative,
}

/// An increasing change of variables with an optional range rescaling.
pub struct Warp {
    domain: Interval,
    psi: RealFn,
    psi_prime: RealFn,
    rho: Rescale,
    inverse: Option<RealFn>,
}

impl std::fmt::Debug for Warp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Warp")
            .field("domain", &self.domain)
            .field("image", &self.image())
            .field("closed_form_inverse", &self.inverse.is_some())
            .finish()
    }
}

impl Warp {
    pub fn new<P, D, R>(domain: Interval, psi: P, psi_prime: D, rho: R) -> Result<Self>
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
        R: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let w = Warp {
            domain,
            psi: Box::new(psi),
            psi_prime: Box::new(psi_prime),
            rho: Rescale::Function(Box::new(rho)),
            inverse: None,
        };
        w.check_on(domain.grid(MONOTONE_CHECK_POINTS))?;
        Ok(w)
    }

    /// A warp with `ρ = (ψ⁻¹)'`. If `X` has density `f` then the result is
    /// the density of `ψ(X)`.
    pub fn mass_preserving<P, D>(domain: Interval, psi: P, psi_prime: D) -> Result<Self>
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let w = Warp {
            domain,
            psi: Box::new(psi),
            psi_prime: Box::new(psi_prime),
            rho: Rescale::InverseDerivative,
            inverse: None,
        };
        w.check_on(domain.grid(MONOTONE_CHECK_POINTS))?;
        Ok(w)
    }

    pub fn identity(domain: Interval) -> Self {
        Warp::new(domain, |x| x, |_| 1.0, |_| 1.0).expect("identity is increasing").with_inverse(|y| y)
    }

    /// `ψ(x) = x + offset` with `ρ ≡ 1`.
    pub fn translation(domain: Interval, offset: f64) -> Result<Self> {
        Ok(Warp::new(domain, move |x| x + offset, |_| 1.0, |_| 1.0)?.with_inverse(move |y| y - offset))
    }

    /// Supplies a closed-form `ψ⁻¹`; otherwise it is found by bisection.
    pub fn with_inverse<F: Fn(f64) -> f64 + Send + Sync + 'static>(mut self, inverse: F) -> Self {
        self.inverse = Some(Box::new(inverse));
        self
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn image(&self) -> (f64, f64) {
        ((self.psi)(self.domain.lo), (self.psi)(self.domain.hi))
    }

    pub fn psi(&self, x: f64) -> f64 {
        (self.psi)(x)
    }

    pub fn psi_prime(&self, x: f64) -> f64 {
        (self.psi_prime)(x)
    }

    /// `ρ(y)` for `y` in `ψ(I)`.
    pub fn rho(&self, y: f64) -> f64 {
        match &self.rho {
            Rescale::Function(r) => r(y),
            Rescale::InverseDerivative => 1.0 / (self.psi_prime)(self.inverse(y)),
        }
    }

    /// `ψ⁻¹(y)` for `y` in `ψ(I)`.
    pub fn inverse(&self, y: f64) -> f64 {
        if let Some(inv) = &self.inverse {
            return inv(y);
        }
        let (mut lo, mut hi) = (self.domain.lo, self.domain.hi);
        while hi - lo > INVERSE_TOLERANCE {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if (self.psi)(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn check_on(&self, points: impl Iterator<Item = f64>) -> Result<()> {
        let mut prev: Option<f64> = None;
        for x in points {
            let y = (self.psi)(x);
            if !(0.0..=1.0).contains(&y) {
                return Err(Error::WarpRange { x, image: y });
            }
            if prev.is_some_and(|p| y <= p) {
                return Err(Error::NonMonotoneWarp { x });
            }
            prev = Some(y);
        }
        Ok(())
    }
}

/// Shifts right by `shift` samples (left if negative), filling with zeros.
///
/// Fails if a nonzero sample would be pushed off the grid.
pub fn shift(x: &Signal, shift: isize) -> Result<Signal> {
    let n = x.len();
    let k = shift.unsigned_abs();
    let lost = if shift >= 0 { n.saturating_sub(k)..n } else { 0..k.min(n) };
    if let Some(index) = lost.into_iter().find(|&i| x[i] != 0.0) {
        return Err(Error::ShiftOverflow { shift, index });
    }
    let mut out = vec![0.0; n];
    if k < n {
        if shift >= 0 {
            out[k..].copy_from_slice(&x[..n - k]);
        } else {
            out[..n - k].copy_from_slice(&x[k..]);
        }
    }
    Signal::new(out)
}

/// Samples `f_{ψ,ρ}` on the grid `j/n`.
pub fn apply_warp<F: Fn(f64) -> f64>(f: F, w: &Warp, n: usize) -> Result<Signal> {
    let nf = n as f64;
    let domain = w.domain();
    let interior = (1..=n).map(|j| j as f64 / nf).filter(|&x| domain.lo < x && x < domain.hi);
    w.check_on(std::iter::once(domain.lo).chain(interior).chain(std::iter::once(domain.hi)))?;
    let (a, b) = w.image();
    Signal::sample(
        |x| {
            if a <= x && x <= b {
                f(w.inverse(x)) * w.rho(x)
            } else {
                0.0
            }
        },
        n,
    )
}

/// The two parts of the perturbation size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Epsilon {
    /// `max_I |x - ψ(x)|`.
    pub displacement: f64,
    /// `max_I |1 - ρ(ψ(x)) ψ'(x)|`.
    pub rescale: f64,
}

impl Epsilon {
    pub fn total(&self) -> f64 {
        self.displacement + self.rescale
    }
}

/// Perturbation size of `w`, maximized over `resolution` equispaced points of
/// its domain (endpoints included).
pub fn epsilon_of(w: &Warp, resolution: usize) -> Epsilon {
    w.domain().grid(resolution).fold(Epsilon { displacement: 0.0, rescale: 0.0 }, |e, x| {
        let y = w.psi(x);
        Epsilon {
            displacement: e.displacement.max((x - y).abs()),
            rescale: e.rescale.max((1.0 - w.rho(y) * w.psi_prime(x)).abs()),
        }
    })
}
