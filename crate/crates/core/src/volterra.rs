//! Discrete Volterra operator and the norms built on it.
//!
//! With samples `x_1..x_n` on the grid `j/n`, the discrete Volterra operator is
//! the scaled running sum
//!
//! ```text
//! (V x)_k = (1/n) Σ_{j<=k} x_j
//! ```
//!
//! (divided by `n`, not `k`), and the Volterra p-norm is `‖x‖*_p = ‖V x‖_p`
//! where the plain norm carries the same `1/n` weight:
//! `‖x‖_p = ((1/n) Σ |x_j|^p)^(1/p)`, `‖x‖_∞ = max |x_j|`.
//!
//! On densities the Volterra 1-distance is the Earth Mover's Distance and the
//! ∞-distance is the Kolmogorov metric.

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::signal::{check_lengths, Density, Signal};

/// Applies the discrete Volterra operator.
pub fn volterra(x: &Signal) -> Signal {
    Signal::new(cumulative(x)).expect("running sums of finite values are finite")
}

/// `(V x)_k` as a plain vector. Summation is sequential, left to right.
pub(crate) fn cumulative(x: &[f64]) -> Vec<f64> {
    let n = x.len() as f64;
    let mut acc = 0.0;
    x.iter()
        .map(|v| {
            acc += v;
            acc / n
        })
        .collect()
}

/// Normalized p-norm of a slice.
pub fn p_norm_slice(x: &[f64], p: Exponent) -> f64 {
    let n = x.len() as f64;
    match p {
        Exponent::Infinity => max_abs(x),
        Exponent::Finite(1.0) => x.iter().map(|v| v.abs()).sum::<f64>() / n,
        Exponent::Finite(p) => {
            // Scale by the max so large p neither overflows nor underflows.
            let scale = max_abs(x);
            if scale == 0.0 {
                return 0.0;
            }
            let mean = x.iter().map(|v| (v.abs() / scale).powf(p)).sum::<f64>() / n;
            scale * mean.powf(1.0 / p)
        }
    }
}

fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m: f64, v| m.max(v.abs()))
}

/// `‖x‖_p` with the `1/n` normalization.
pub fn p_norm(x: &Signal, p: Exponent) -> f64 {
    p_norm_slice(x, p)
}

/// `‖x‖*_p = ‖V x‖_p`.
pub fn volterra_norm(x: &Signal, p: Exponent) -> f64 {
    p_norm_slice(&cumulative(x), p)
}

/// Plain p-distance `‖x - y‖_p`.
pub fn p_distance(x: &Signal, y: &Signal, p: Exponent) -> Result<f64> {
    Ok(p_norm(&x.sub(y)?, p))
}

/// Volterra p-distance `‖x - y‖*_p`.
///
/// Computed as `‖V x - V y‖_p`, i.e. as a distance between the two running
/// integrals; by linearity this is `volterra_norm(x - y, p)` up to rounding.
pub fn volterra_distance(x: &Signal, y: &Signal, p: Exponent) -> Result<f64> {
    check_lengths(x, y)?;
    let vx = cumulative(x);
    let vy = cumulative(y);
    let diff: Vec<f64> = vx.iter().zip(&vy).map(|(a, b)| a - b).collect();
    Ok(p_norm_slice(&diff, p))
}

/// Earth Mover's Distance between two densities on the same grid.
pub fn emd(p: &Density, q: &Density) -> Result<f64> {
    volterra_distance(p, q, Exponent::ONE)
}

/// Kolmogorov metric: largest gap between the two cumulative distributions.
pub fn km(p: &Density, q: &Density) -> Result<f64> {
    volterra_distance(p, q, Exponent::Infinity)
}

/// Normalized pairing `<u, g> = (1/n) Σ u_k g_k`.
pub fn inner(u: &[f64], g: &[f64]) -> Result<f64> {
    check_lengths(u, g)?;
    Ok(u.iter().zip(g).map(|(a, b)| a * b).sum::<f64>() / u.len() as f64)
}

/// A witness `g` with `‖g‖_q <= 1` whose pairing with `V x` attains `‖x‖*_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCertificate {
    pub g: Signal,
    /// `<V x, g>`.
    pub value: f64,
}

/// Builds the maximizer of `<V x, g>` over the unit ball of the conjugate norm.
///
/// For finite `p` this is `g_k = sign(u_k) |u_k|^(p-1) / ‖u‖_p^(p-1)` with
/// `u = V x`. For `p = ∞` it is `n · sign(u_k*) · e_k*` at the first index
/// maximizing `|u_k|`, which has unit normalized 1-norm.
pub fn dual_certificate(x: &Signal, p: Exponent) -> Result<DualCertificate> {
    let u = cumulative(x);
    let n = u.len();
    let scale = max_abs(&u);
    if scale == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let g: Vec<f64> = match p {
        Exponent::Infinity => {
            let k = u
                .iter()
                .enumerate()
                .fold((0, -1.0), |(bk, bv), (k, v)| if v.abs() > bv { (k, v.abs()) } else { (bk, bv) })
                .0;
            let mut g = vec![0.0; n];
            g[k] = n as f64 * u[k].signum();
            g
        }
        Exponent::Finite(1.0) => u.iter().map(|&v| sign(v)).collect(),
        Exponent::Finite(p) => {
            // Work with w = u / max|u|; the ratio below is scale-invariant.
            let w: Vec<f64> = u.iter().map(|v| v / scale).collect();
            let denom = p_norm_slice(&w, Exponent::Finite(p)).powf(p - 1.0);
            w.iter().map(|&v| sign(v) * v.abs().powf(p - 1.0) / denom).collect()
        }
    };
    let value = inner(&u, &g)?;
    Ok(DualCertificate { g: Signal::new(g)?, value })
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}
