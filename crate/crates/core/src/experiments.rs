//! Seeded Monte-Carlo runs and parameter sweeps.
//!
//! Every experiment produces [`SweepResult`] rows, written as CSV with the
//! header `parameter,p,value,family,n,trials,seed`. Trials run on the rayon
//! pool, but each trial draws from its own stream (see [`crate::rng`]) and
//! results are reduced in trial order, so output does not depend on the
//! number of threads.

use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalogue::CatalogueSignal;
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::oracles::refine_norm;
use crate::perturbation::shift;
use crate::radon::{project, projection_bound, Grid2D, ProjectionOptions};
use crate::rng::trial_rng;
use crate::signal::Signal;
use crate::volterra::{cumulative, p_distance, p_norm, p_norm_slice, volterra_distance};

/// The reference norm is sampled on a grid this many times finer than the
/// largest `n` of a noise run.
pub const REFERENCE_OVERSAMPLING: usize = 16;

/// One output row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// `n` for noise runs, the shift `ε` for shift sweeps, `θ` for projection sweeps.
    pub parameter: f64,
    pub p: Exponent,
    pub value: f64,
    pub family: Family,
    pub n: usize,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
}

/// What a row's `value` measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Mean relative error of the noisy Volterra norm.
    NoiseError,
    /// Monte-Carlo standard error of the preceding mean.
    NoiseStdError,
    /// Volterra distance (normalized by `‖f‖_p` in shift sweeps).
    Volterra,
    /// Plain p-norm distance (normalized by `‖f‖_p` in shift sweeps).
    Plain,
    /// Certified projection bound `‖F‖_p |sin(θ/2)|`.
    Bound,
}

pub fn write_csv<W: Write>(rows: &[SweepResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<SweepResult>> {
    csv::Reader::from_reader(input).deserialize().map(|r| r.map_err(Error::from)).collect()
}

/// Sidecar describing how a CSV was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config: serde_json::Value,
    pub git_describe: String,
    pub wall_time_seconds: f64,
}

/// Mean and standard error of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    /// `s / √M` with the unbiased sample deviation; 0 for a single trial.
    pub std_error: f64,
}

impl Summary {
    /// Sums in slice order.
    pub fn of(values: &[f64]) -> Summary {
        let m = values.len() as f64;
        let mean = values.iter().sum::<f64>() / m;
        if values.len() < 2 {
            return Summary { mean, std_error: 0.0 };
        }
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (m - 1.0);
        Summary { mean, std_error: (var / m).sqrt() }
    }
}

/// Least-squares slope of `log2 y` against `log2 x`.
pub fn log2_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.log2()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.log2()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub n_values: Vec<usize>,
    pub trials: usize,
    /// Per-sample noise variance `σ²`.
    pub variance: f64,
    pub p_values: Vec<Exponent>,
    pub seed: u64,
    pub signal: CatalogueSignal,
}

impl NoiseConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() || self.n_values[0] == 0 {
            return Err(Error::Config("n_values must be a non-empty list of positive sizes".into()));
        }
        if self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("n_values must be strictly increasing".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if !(self.variance > 0.0 && self.variance.is_finite()) {
            return Err(Error::Config(format!("variance must be positive, got {}", self.variance)));
        }
        if self.p_values.is_empty() {
            return Err(Error::Config("p_values must not be empty".into()));
        }
        Ok(())
    }
}

/// Relative error of the noisy Volterra norm for one `(n, p)` cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseRow {
    pub n: usize,
    pub p: Exponent,
    pub error: Summary,
}

/// For each `p` and `n`, the mean over trials of `|‖x_n + z‖_p* - ‖f‖_p*| / ‖f‖_p*`
/// with `z` iid `N(0, σ²)`. Rows are ordered by `p`, then `n`.
pub fn noise_error(cfg: &NoiseConfig) -> Result<Vec<NoiseRow>> {
    cfg.validate()?;
    let sigma = cfg.variance.sqrt();
    let finest = REFERENCE_OVERSAMPLING * cfg.n_values[cfg.n_values.len() - 1];
    let mut rows = Vec::with_capacity(cfg.p_values.len() * cfg.n_values.len());
    for (p_index, &p) in cfg.p_values.iter().enumerate() {
        let reference = refine_norm(|x| cfg.signal.eval(x), p, &[finest])?[0];
        if reference == 0.0 {
            return Err(Error::ZeroNorm);
        }
        for &n in &cfg.n_values {
            let clean = cfg.signal.sample(n)?;
            let errors: Vec<f64> = (0..cfg.trials)
                .into_par_iter()
                .map(|trial| {
                    let mut rng = trial_rng(cfg.seed, n, p_index, trial);
                    let noisy: Vec<f64> = clean
                        .iter()
                        .map(|&v| {
                            let z: f64 = StandardNormal.sample(&mut rng);
                            v + sigma * z
                        })
                        .collect();
                    (p_norm_slice(&cumulative(&noisy), p) - reference).abs() / reference
                })
                .collect();
            rows.push(NoiseRow { n, p, error: Summary::of(&errors) });
        }
    }
    Ok(rows)
}

pub fn noise_rows(cfg: &NoiseConfig, rows: &[NoiseRow]) -> Vec<SweepResult> {
    let make = |r: &NoiseRow, family, value| SweepResult {
        parameter: r.n as f64,
        p: r.p,
        value,
        family,
        n: r.n,
        trials: Some(cfg.trials),
        seed: Some(cfg.seed),
    };
    rows.iter()
        .flat_map(|r| [make(r, Family::NoiseError, r.error.mean), make(r, Family::NoiseStdError, r.error.std_error)])
        .collect()
}

/// `σ̄ = √((1/n) Σ σ_j²)`.
pub fn rms_sigma(sigmas: &[f64]) -> f64 {
    (sigmas.iter().map(|s| s * s).sum::<f64>() / sigmas.len() as f64).sqrt()
}

/// Upper bound `√(2π) σ̄ / √n` on the expected Volterra norm of pure noise.
pub fn noise_expectation_bound(sigma_bar: f64, n: usize) -> f64 {
    (2.0 * PI).sqrt() * sigma_bar / (n as f64).sqrt()
}

/// `P(‖z‖_∞* >= t) <= 2 exp(-n t² / (2 σ̄²))`.
pub fn noise_tail_bound(sigma_bar: f64, n: usize, t: f64) -> f64 {
    2.0 * (-(n as f64) * t * t / (2.0 * sigma_bar * sigma_bar)).exp()
}

/// Volterra norms of independent draws of `z_j ~ N(0, σ_j²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureNoise {
    /// One norm per trial, in trial order.
    pub norms: Vec<f64>,
}

impl PureNoise {
    pub fn summary(&self) -> Summary {
        Summary::of(&self.norms)
    }

    /// Fraction of trials with norm `>= t`, and its standard error.
    pub fn tail_frequency(&self, t: f64) -> Summary {
        let hits: Vec<f64> = self.norms.iter().map(|&v| if v >= t { 1.0 } else { 0.0 }).collect();
        Summary::of(&hits)
    }
}

pub fn pure_noise_norm(sigmas: &[f64], p: Exponent, trials: usize, seed: u64) -> Result<PureNoise> {
    if sigmas.is_empty() {
        return Err(Error::EmptySignal);
    }
    if let Some((index, &value)) = sigmas.iter().enumerate().find(|(_, s)| !(**s > 0.0 && s.is_finite())) {
        return Err(Error::Config(format!("sigma {index} must be positive, got {value}")));
    }
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let n = sigmas.len();
    let norms = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, n, 0, trial);
            let z: Vec<f64> = sigmas
                .iter()
                .map(|s| {
                    let g: f64 = StandardNormal.sample(&mut rng);
                    s * g
                })
                .collect();
            p_norm_slice(&cumulative(&z), p)
        })
        .collect();
    Ok(PureNoise { norms })
}

/// A list of values, or an evenly spaced range with `count` points including both ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueGrid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, count: usize },
}

impl ValueGrid {
    pub fn values(&self) -> Result<Vec<f64>> {
        let v = match self {
            ValueGrid::List(v) => v.clone(),
            ValueGrid::Range { start, stop, count } => match count {
                0 => Vec::new(),
                1 => vec![*start],
                _ => {
                    let step = (stop - start) / (*count - 1) as f64;
                    (0..*count).map(|i| if i + 1 == *count { *stop } else { start + i as f64 * step }).collect()
                }
            },
        };
        if v.is_empty() {
            return Err(Error::Config("empty parameter grid".into()));
        }
        if let Some(bad) = v.iter().find(|x| !x.is_finite()) {
            return Err(Error::Config(format!("non-finite grid value {bad}")));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftConfig {
    pub signal: CatalogueSignal,
    pub n: usize,
    /// Shifts as fractions of the unit interval; each is rounded to `round(ε n)` samples.
    pub eps: ValueGrid,
    pub p_values: Vec<Exponent>,
}

/// Distances between `f` and its shift by `ε`, both normalized by `‖f‖_p`.
/// Rows are ordered by `ε`, then `p`, then family (Volterra before plain).
pub fn shift_sweep(cfg: &ShiftConfig) -> Result<Vec<SweepResult>> {
    if cfg.n == 0 {
        return Err(Error::Config("n must be positive".into()));
    }
    if cfg.p_values.is_empty() {
        return Err(Error::Config("p_values must not be empty".into()));
    }
    let eps = cfg.eps.values()?;
    let x = cfg.signal.sample(cfg.n)?;
    let norms: Vec<f64> = cfg.p_values.iter().map(|&p| p_norm(&x, p)).collect();
    if norms.contains(&0.0) {
        return Err(Error::ZeroNorm);
    }
    let mut rows = Vec::with_capacity(eps.len() * cfg.p_values.len() * 2);
    for &e in &eps {
        let k = (e * cfg.n as f64).round() as isize;
        let y = shift(&x, k)?;
        for (&p, &norm) in cfg.p_values.iter().zip(&norms) {
            let row = |family, value: f64| SweepResult {
                parameter: e,
                p,
                value: value / norm,
                family,
                n: cfg.n,
                trials: None,
                seed: None,
            };
            rows.push(row(Family::Volterra, volterra_distance(&x, &y, p)?));
            rows.push(row(Family::Plain, p_distance(&x, &y, p)?));
        }
    }
    Ok(rows)
}

/// Where a projection sweep gets its grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GridSource {
    /// [`Grid2D::two_gaussian`].
    TwoGaussian { m: usize, sigma: f64 },
    /// A CSV grid with its JSON header.
    File { csv: PathBuf, header: PathBuf },
}

impl GridSource {
    pub fn load(&self) -> Result<Grid2D> {
        match self {
            GridSource::TwoGaussian { m, sigma } => Grid2D::two_gaussian(*m, *sigma),
            GridSource::File { csv, header } => Grid2D::load(csv, header),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadonConfig {
    pub grid: GridSource,
    /// Output length of each projection.
    pub n: usize,
    pub theta: ValueGrid,
    pub p_values: Vec<Exponent>,
    #[serde(default)]
    pub nodes_per_unit: Option<usize>,
}

/// Distances between `f_0` and `f_θ` (not normalized), plus the projection
/// bound for `|θ| <= π/4`. Rows are ordered by `θ`, then `p`, then family.
pub fn projection_sweep(
    grid: &Grid2D,
    thetas: &[f64],
    p_values: &[Exponent],
    n: usize,
    opts: &ProjectionOptions,
) -> Result<Vec<SweepResult>> {
    if p_values.is_empty() {
        return Err(Error::Config("p_values must not be empty".into()));
    }
    let base = project(grid, 0.0, n, opts)?;
    let projections: Vec<Signal> = thetas.par_iter().map(|&t| project(grid, t, n, opts)).collect::<Result<_>>()?;
    let grid_norms: Vec<f64> = p_values.iter().map(|&p| grid.p_norm_over_disc(p)).collect();
    let mut rows = Vec::new();
    for (&theta, f) in thetas.iter().zip(&projections) {
        for (&p, &fp) in p_values.iter().zip(&grid_norms) {
            let row = |family, value| SweepResult { parameter: theta, p, value, family, n, trials: None, seed: None };
            rows.push(row(Family::Volterra, volterra_distance(&base, f, p)?));
            rows.push(row(Family::Plain, p_distance(&base, f, p)?));
            let bound = projection_bound(theta, 0.0, fp);
            if bound.certified {
                rows.push(row(Family::Bound, bound.value));
            }
        }
    }
    Ok(rows)
}

pub fn run_radon(cfg: &RadonConfig) -> Result<Vec<SweepResult>> {
    let grid = cfg.grid.load()?;
    let thetas = cfg.theta.values()?;
    projection_sweep(&grid, &thetas, &cfg.p_values, cfg.n, &ProjectionOptions { nodes_per_unit: cfg.nodes_per_unit })
}

pub fn run_noise(cfg: &NoiseConfig) -> Result<Vec<SweepResult>> {
    Ok(noise_rows(cfg, &noise_error(cfg)?))
}
