//! Parallel-beam projections of gridded 2-D functions.
//!
//! The projection at angle `θ` is
//!
//! ```text
//! f_θ(x) = ∫ F(cos θ · x + sin θ · y,  cos θ · y - sin θ · x) dy
//! ```
//!
//! for `x ∈ [-1/2, 1/2]`, sampled at `x_j = -1/2 + j/n` (`j = 1..n`) so that the
//! result lines up with the standard `j/n` grid of [`Signal`].
//!
//! `F` is known only at cell centres. Between them it is interpolated
//! bilinearly against a one-cell ring of zeros, i.e. as a sum of tent
//! functions. That interpolant is continuous and integrates to exactly
//! `(1/m²) Σ F`. The line integral uses the trapezoid rule along the whole
//! chord through the zero-padded square; for `F` supported in the unit disc
//! this is the same integral as over `y ∈ [-1/2, 1/2]`.

use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::signal::Signal;

/// Default for [`Grid2D::support_tolerance`]: `max_{outside D} |F| <= 1e-8 · max |F|`.
pub const DEFAULT_SUPPORT_TOLERANCE: f64 = 1e-8;

/// Angles are reduced modulo 2π and rounded to multiples of this.
pub const ANGLE_QUANTUM: f64 = 1.0 / (1u64 << 30) as f64;

/// `m × m` samples on `[-1/2, 1/2]²`.
///
/// Storage is row-major with row 0 at the largest `y`, matching the CSV
/// layout. Cell `(row, col)` is centred at
/// `(-1/2 + (col + 1/2)/m, 1/2 - (row + 1/2)/m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    m: usize,
    values: Vec<f64>,
    support_tolerance: f64,
}

/// JSON sidecar describing a grid CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridHeader {
    pub m: usize,
    #[serde(default = "default_tolerance")]
    pub support_tolerance: f64,
}

fn default_tolerance() -> f64 {
    DEFAULT_SUPPORT_TOLERANCE
}

impl Grid2D {
    pub fn new(m: usize, values: Vec<f64>, support_tolerance: f64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidGrid(format!("m must be at least 2, got {m}")));
        }
        if values.len() != m * m {
            return Err(Error::InvalidGrid(format!("expected {} values, got {}", m * m, values.len())));
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        if support_tolerance.is_nan() || support_tolerance < 0.0 {
            return Err(Error::InvalidGrid(format!("bad support tolerance {support_tolerance}")));
        }
        let grid = Grid2D { m, values, support_tolerance };
        let overall = grid.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let outside =
            (0..m * m).filter(|&i| !grid.in_disc(i / m, i % m)).fold(0.0f64, |a, i| a.max(grid.values[i].abs()));
        let allowed = support_tolerance * overall;
        if outside > allowed {
            return Err(Error::SupportViolation { outside, allowed });
        }
        Ok(grid)
    }

    /// Samples `f(x, y)` at the cell centres.
    pub fn from_fn<F: Fn(f64, f64) -> f64>(m: usize, f: F, support_tolerance: f64) -> Result<Self> {
        let mut values = Vec::with_capacity(m * m);
        for row in 0..m {
            for col in 0..m {
                let (x, y) = cell_center(m, row, col);
                values.push(f(x, y));
            }
        }
        Grid2D::new(m, values, support_tolerance)
    }

    /// Two Gaussian bumps `exp(-|w - a|²/σ) + exp(-|w - b|²/σ)` with
    /// `a = (0, 1/2)`, `b = (0, -1/2)`.
    ///
    /// The bump centres sit on the boundary of the unit disc, so half of each
    /// bump lies outside it (and outside the square); the support check is
    /// disabled for this grid.
    pub fn two_gaussian(m: usize, sigma: f64) -> Result<Self> {
        if sigma.is_nan() || sigma <= 0.0 {
            return Err(Error::InvalidGrid(format!("sigma must be positive, got {sigma}")));
        }
        let bump = |x: f64, y: f64, cy: f64| (-(x * x + (y - cy) * (y - cy)) / sigma).exp();
        Grid2D::from_fn(m, |x, y| bump(x, y, 0.5) + bump(x, y, -0.5), 1.0)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn support_tolerance(&self) -> f64 {
        self.support_tolerance
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.m + col]
    }

    pub fn cell_center(&self, row: usize, col: usize) -> (f64, f64) {
        cell_center(self.m, row, col)
    }

    /// Whether the centre of the cell lies in the closed disc of radius 1/2.
    pub fn in_disc(&self, row: usize, col: usize) -> bool {
        let (x, y) = self.cell_center(row, col);
        x * x + y * y <= 0.25
    }

    /// `(1/m²) Σ F`.
    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() / (self.m * self.m) as f64
    }

    /// p-norm over the disc, normalized like the 1-D norms:
    /// `(Σ_{cells in D} |F|^p / m²)^(1/p)`, or the max over those cells.
    pub fn p_norm_over_disc(&self, p: Exponent) -> f64 {
        let m = self.m;
        let inside = (0..m * m).filter(|&i| self.in_disc(i / m, i % m)).map(|i| self.values[i].abs());
        match p {
            Exponent::Infinity => inside.fold(0.0, f64::max),
            Exponent::Finite(p) => {
                let scale = inside.clone().fold(0.0, f64::max);
                if scale == 0.0 {
                    return 0.0;
                }
                let sum: f64 = inside.map(|v| (v / scale).powf(p)).sum();
                scale * (sum / (m * m) as f64).powf(1.0 / p)
            }
        }
    }

    /// Zero-padded bilinear interpolation at `(x, y)`.
    pub fn interpolate(&self, x: f64, y: f64) -> f64 {
        let m = self.m as f64;
        let gx = (x + 0.5) * m - 0.5;
        let gy = (0.5 - y) * m - 0.5;
        if !(gx > -1.0 && gx < m && gy > -1.0 && gy < m) {
            return 0.0;
        }
        let (cx, ry) = (gx.floor(), gy.floor());
        let (fx, fy) = (gx - cx, gy - ry);
        let (c0, r0) = (cx as isize, ry as isize);
        let at = |r: isize, c: isize| -> f64 {
            if r < 0 || c < 0 || r >= self.m as isize || c >= self.m as isize {
                0.0
            } else {
                self.values[r as usize * self.m + c as usize]
            }
        };
        (1.0 - fy) * ((1.0 - fx) * at(r0, c0) + fx * at(r0, c0 + 1))
            + fy * ((1.0 - fx) * at(r0 + 1, c0) + fx * at(r0 + 1, c0 + 1))
    }

    pub fn header(&self) -> GridHeader {
        GridHeader { m: self.m, support_tolerance: self.support_tolerance }
    }

    /// Reads a dense CSV (`m` rows of `m` comma-separated values, top row =
    /// largest `y`) and validates it against its JSON header.
    pub fn load(csv_path: &Path, header_path: &Path) -> Result<Self> {
        let header: GridHeader = serde_json::from_reader(BufReader::new(File::open(header_path)?))?;
        let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_path(csv_path)?;
        let mut values = Vec::with_capacity(header.m * header.m);
        let mut rows = 0;
        for record in reader.records() {
            let record = record?;
            if record.len() != header.m {
                return Err(Error::InvalidGrid(format!(
                    "row {rows} has {} columns, header says m = {}",
                    record.len(),
                    header.m
                )));
            }
            for field in record.iter() {
                let v: f64 =
                    field.parse().map_err(|_| Error::InvalidGrid(format!("row {rows}: cannot parse {field:?}")))?;
                values.push(v);
            }
            rows += 1;
        }
        if rows != header.m {
            return Err(Error::InvalidGrid(format!("found {rows} rows, header says m = {}", header.m)));
        }
        Grid2D::new(header.m, values, header.support_tolerance)
    }

    pub fn save(&self, csv_path: &Path, header_path: &Path) -> Result<()> {
        let mut out = BufWriter::new(File::create(csv_path)?);
        for row in self.values.chunks(self.m) {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        out.flush()?;
        let mut h = BufWriter::new(File::create(header_path)?);
        serde_json::to_writer_pretty(&mut h, &self.header())?;
        h.flush()?;
        Ok(())
    }
}

fn cell_center(m: usize, row: usize, col: usize) -> (f64, f64) {
    let mf = m as f64;
    (-0.5 + (col as f64 + 0.5) / mf, 0.5 - (row as f64 + 0.5) / mf)
}

/// Quadrature settings for [`project`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ProjectionOptions {
    /// Trapezoid nodes per unit length along each line; `None` means `m`.
    pub nodes_per_unit: Option<usize>,
}

/// Reduces `theta` modulo 2π onto the [`ANGLE_QUANTUM`] lattice, so that
/// `theta` and `theta + 2π` map to the same angle.
pub fn canonical_angle(theta: f64) -> f64 {
    let turns = (2.0 * PI / ANGLE_QUANTUM).round() as i64;
    let k = (theta.rem_euclid(2.0 * PI) / ANGLE_QUANTUM).round() as i64;
    k.rem_euclid(turns) as f64 * ANGLE_QUANTUM
}

/// Samples `f_θ` at `x_j = -1/2 + j/n`, `j = 1..n`.
pub fn project(grid: &Grid2D, theta: f64, n: usize, opts: &ProjectionOptions) -> Result<Signal> {
    if n < 2 {
        return Err(Error::InvalidGrid(format!("projection needs n >= 2, got {n}")));
    }
    if !theta.is_finite() {
        return Err(Error::InvalidGrid(format!("angle must be finite, got {theta}")));
    }
    let theta = canonical_angle(theta);
    let (s, c) = theta.sin_cos();
    let m = grid.m() as f64;
    // Half-side of the zero-padded square and half-length of its diagonal.
    let half = 0.5 + 0.5 / m;
    let reach = SQRT_2 * half;
    let per_unit = opts.nodes_per_unit.unwrap_or(grid.m()).max(2) as f64;
    let nodes = (2.0 * reach * per_unit).ceil() as usize + 1;
    let h = 2.0 * reach / (nodes - 1) as f64;

    let nf = n as f64;
    let out = (1..=n)
        .map(|j| {
            let x = -0.5 + j as f64 / nf;
            // Clip the line to the padded square; the interpolant is zero
            // outside it, so only the nodes inside contribute.
            let (lo, hi) = chord(c, s, x, half);
            if lo > hi {
                return 0.0;
            }
            let first = ((lo + reach) / h).ceil().max(0.0) as usize;
            let last = (((hi + reach) / h).floor() as usize).min(nodes - 1);
            let mut acc = 0.0;
            for i in first..=last {
                let y = -reach + i as f64 * h;
                let w = if i == 0 || i == nodes - 1 { 0.5 } else { 1.0 };
                acc += w * grid.interpolate(c * x + s * y, c * y - s * x);
            }
            acc * h
        })
        .collect();
    Signal::new(out)
}

/// Range of `y` for which `(c x + s y, c y - s x)` stays in `[-half, half]²`.
fn chord(c: f64, s: f64, x: f64, half: f64) -> (f64, f64) {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    // Each coordinate is `offset + slope · y`.
    for (offset, slope) in [(c * x, s), (-s * x, c)] {
        if slope.abs() < 1e-300 {
            if offset.abs() > half {
                return (1.0, 0.0);
            }
            continue;
        }
        let a = (-half - offset) / slope;
        let b = (half - offset) / slope;
        lo = lo.max(a.min(b));
        hi = hi.min(a.max(b));
    }
    (lo, hi)
}

/// Upper bound on the Volterra distance between two projections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionBound {
    /// `‖F‖_p · √((1 - cos(θ - φ)) / 2)`.
    pub value: f64,
    /// The bound is only guaranteed for `|θ - φ| <= π/4`.
    pub certified: bool,
}

pub fn projection_bound(theta: f64, phi: f64, f_norm: f64) -> ProjectionBound {
    let d = theta - phi;
    ProjectionBound {
        // √((1 - cos d)/2) = |sin(d/2)|, without the cancellation.
        value: f_norm * (0.5 * d).sin().abs(),
        certified: d.abs() <= FRAC_PI_4,
    }
}
