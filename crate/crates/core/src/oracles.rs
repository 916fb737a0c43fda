//! Independent brute-force checks for the norm-based distances.
//!
//! [`transport_emd`] solves the 1-D transportation problem directly by
//! monotone (north-west corner) matching of atoms, which is optimal for the
//! cost `|x - y|`. [`cdf_max`] builds both cumulative distributions and takes
//! the largest gap. Neither goes through [`crate::volterra`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::signal::{check_lengths, Density, Signal, DENSITY_MASS_TOLERANCE};
use crate::volterra::{dual_certificate, p_norm};

/// One unit of a transport plan: `mass` moved from atom `source` of P to
/// atom `target` of Q (0-based indices, atom `i` at position `(i+1)/n`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transfer {
    pub source: usize,
    pub target: usize,
    pub mass: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TransportPlan {
    pub transfers: Vec<Transfer>,
}

impl TransportPlan {
    /// Largest marginal violation against the atom masses `P_j / n`, `Q_j / n`,
    /// or `None` if some mass is negative.
    pub fn marginal_error(&self, p: &Density, q: &Density) -> Option<f64> {
        let n = p.len();
        let mut rows = vec![0.0; n];
        let mut cols = vec![0.0; q.len()];
        for t in &self.transfers {
            if t.mass < 0.0 {
                return None;
            }
            rows[t.source] += t.mass;
            cols[t.target] += t.mass;
        }
        let nf = n as f64;
        let row_err = rows.iter().zip(p.iter()).map(|(r, v)| (r - v / nf).abs());
        let col_err = cols.iter().zip(q.iter()).map(|(c, v)| (c - v / nf).abs());
        Some(row_err.chain(col_err).fold(0.0, f64::max))
    }

    /// `Σ mass · |i - j| / n`.
    pub fn cost(&self, n: usize) -> f64 {
        self.transfers.iter().map(|t| t.mass * t.source.abs_diff(t.target) as f64 / n as f64).sum()
    }
}

/// Optimal transport cost between two densities and a plan attaining it.
pub fn transport_emd(p: &Density, q: &Density) -> Result<(f64, TransportPlan)> {
    check_lengths(p, q)?;
    let n = p.len();
    let nf = n as f64;
    let mut transfers = Vec::with_capacity(2 * n);
    let (mut i, mut j) = (0, 0);
    let mut supply = p[0] / nf;
    let mut demand = q[0] / nf;
    loop {
        // Skip exhausted atoms on either side.
        while supply <= 0.0 && i + 1 < n {
            i += 1;
            supply = p[i] / nf;
        }
        while demand <= 0.0 && j + 1 < n {
            j += 1;
            demand = q[j] / nf;
        }
        if supply <= 0.0 || demand <= 0.0 {
            break;
        }
        let moved = supply.min(demand);
        transfers.push(Transfer { source: i, target: j, mass: moved });
        if supply <= demand {
            demand -= supply;
            supply = 0.0;
        } else {
            supply -= demand;
            demand = 0.0;
        }
    }
    let plan = TransportPlan { transfers };
    Ok((plan.cost(n), plan))
}

/// Largest absolute difference of the two cumulative distributions.
pub fn cdf_max(p: &Density, q: &Density) -> Result<f64> {
    check_lengths(p, q)?;
    let n = p.len() as f64;
    let (mut sp, mut sq) = (0.0, 0.0);
    let mut best: f64 = 0.0;
    for (a, b) in p.iter().zip(q.iter()) {
        sp += a;
        sq += b;
        best = best.max((sp / n - sq / n).abs());
    }
    Ok(best)
}

/// Volterra norm of `f` sampled at each grid size in `levels`.
pub fn refine_norm<F: Fn(f64) -> f64>(f: F, p: Exponent, levels: &[usize]) -> Result<Vec<f64>> {
    if levels.is_empty() || levels[0] == 0 || levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidLevels);
    }
    levels.iter().map(|&n| Signal::sample(&f, n).map(|x| crate::volterra::volterra_norm(&x, p))).collect()
}

/// A random density of length `n`; roughly a quarter of the entries are zero.
pub fn random_density<R: Rng>(rng: &mut R, n: usize) -> Density {
    loop {
        let w: Vec<f64> = (0..n).map(|_| if rng.random_bool(0.25) { 0.0 } else { rng.random::<f64>() }).collect();
        if w.iter().any(|&v| v > 0.0) {
            return Density::renormalized(w).expect("nonnegative with positive mass");
        }
    }
}

/// Parameters of the randomized oracle comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    /// Instances draw `n` uniformly from `2..=max_n`.
    pub max_n: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { max_n: 64, trials: 1000, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checked: usize,
    pub failures: usize,
    /// Largest discrepancy observed.
    pub worst: f64,
    pub tolerance: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Exponents the dual-certificate suite sweeps.
pub const DUAL_EXPONENTS: [Exponent; 5] =
    [Exponent::ONE, Exponent::Finite(1.5), Exponent::TWO, Exponent::Finite(10.0), Exponent::Infinity];

/// Runs the transport, CDF and dual-certificate suites against the library's
/// Volterra distance.
pub fn verify(cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    verify_with(cfg, crate::volterra::volterra_distance)
}

/// As [`verify`], with the distance under test supplied by the caller.
pub fn verify_with<D>(cfg: &VerifyConfig, distance: D) -> Result<Vec<SuiteReport>>
where
    D: Fn(&Signal, &Signal, Exponent) -> Result<f64>,
{
    if cfg.max_n < 2 {
        return Err(Error::Config(format!("max n must be at least 2, got {}", cfg.max_n)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut transport = SuiteReport { name: "transport-emd", checked: 0, failures: 0, worst: 0.0, tolerance: 1e-9 };
    let mut cdf = SuiteReport { name: "cdf-max-km", checked: 0, failures: 0, worst: 0.0, tolerance: 0.0 };
    let mut dual = SuiteReport { name: "dual-certificate", checked: 0, failures: 0, worst: 0.0, tolerance: 1e-12 };

    for _ in 0..cfg.trials {
        let n = rng.random_range(2..=cfg.max_n);
        let p = random_density(&mut rng, n);
        let q = random_density(&mut rng, n);

        let (cost, plan) = transport_emd(&p, &q)?;
        let feasible = plan
            .marginal_error(&p, &q)
            .is_some_and(|e| e <= DENSITY_MASS_TOLERANCE + (p.integral() - q.integral()).abs());
        let gap = (distance(&p, &q, Exponent::ONE)? - cost).abs();
        record(&mut transport, gap, feasible);

        let gap = (distance(&p, &q, Exponent::Infinity)? - cdf_max(&p, &q)?).abs();
        record(&mut cdf, gap, true);

        let x = Signal::new((0..n).map(|_| rng.random_range(-1.0..1.0)).collect())?;
        let zero = Signal::zeros(n)?;
        for e in DUAL_EXPONENTS {
            let norm = distance(&x, &zero, e)?;
            if norm == 0.0 {
                continue;
            }
            let cert = dual_certificate(&x, e)?;
            let within_ball = p_norm(&cert.g, e.conjugate()) <= 1.0 + 1e-12;
            record(&mut dual, (cert.value - norm).abs(), within_ball);
        }
    }
    Ok(vec![transport, cdf, dual])
}

fn record(report: &mut SuiteReport, gap: f64, structurally_ok: bool) {
    report.checked += 1;
    report.worst = report.worst.max(gap);
    if !structurally_ok || gap > report.tolerance || gap.is_nan() {
        report.failures += 1;
    }
}
