mod input;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;
use volterra::experiments::{self, Manifest};
use volterra::oracles::{verify_with, VerifyConfig};
use volterra::{
    emd, km, p_distance, p_norm, volterra_distance, volterra_norm, Density, Error, Exponent, NoiseConfig, RadonConfig,
    ShiftConfig, Signal, SweepResult,
};

use input::{read_signal, Column};

const GIT_DESCRIBE: &str = env!("VOLTERRA_GIT_DESCRIBE");

#[derive(Parser)]
#[command(name = "volterra", version, about = "Volterra p-norms, distances and experiments for sampled signals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Volterra p-norm (or plain p-norm) of a signal.
    Norm {
        file: PathBuf,
        /// Exponent: a number >= 1 or "inf".
        #[arg(long)]
        p: String,
        /// Plain p-norm instead of the Volterra norm.
        #[arg(long)]
        plain: bool,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Print the distance between two signals.
    Dist {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, required_unless_present_any = ["emd", "km"], conflicts_with_all = ["emd", "km"])]
        p: Option<String>,
        /// Earth mover's distance; both inputs must be densities.
        #[arg(long, conflicts_with_all = ["km", "plain"])]
        emd: bool,
        /// Kolmogorov metric; both inputs must be densities.
        #[arg(long, conflicts_with = "plain")]
        km: bool,
        /// Plain p-norm distance instead of the Volterra distance.
        #[arg(long)]
        plain: bool,
        /// With --emd/--km, rescale nonnegative inputs to unit mass instead of rejecting them.
        #[arg(long)]
        renormalize: bool,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Run an experiment from a JSON config and write its CSV.
    Experiment {
        kind: ExperimentKind,
        #[arg(long)]
        config: PathBuf,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run manifest destination; defaults to `<out>.manifest.json` when --out is given.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Check the norms against independent oracles on random instances.
    Verify {
        /// Largest instance size.
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Scale every distance by 1 + 1e-6 before comparing (negative control).
        #[arg(long, hide = true)]
        corrupt_norm: bool,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Read a CSV column (0-based index or header name) instead of one value per line.
    #[arg(long)]
    column: Option<String>,
    /// The CSV has a header row (implied when --column is a name).
    #[arg(long)]
    header: bool,
}

impl InputArgs {
    fn read(&self, path: &Path) -> Result<Signal, Failure> {
        let column = self.column.as_deref().map(Column::parse);
        read_signal(path, column.as_ref(), self.header).map_err(|e| Failure::new(codes::PARSE, e))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentKind {
    Noise,
    Shift,
    Radon,
}

mod codes {
    pub const FAILED: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const BAD_EXPONENT: u8 = 3;
    pub const LENGTH_MISMATCH: u8 = 4;
    pub const NOT_A_DENSITY: u8 = 5;
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, err: impl std::fmt::Display) -> Self {
        Failure { code, message: err.to_string() }
    }
}

/// Maps a library error from a distance computation to its exit code.
fn distance_failure(err: Error) -> Failure {
    let code = match err {
        Error::LengthMismatch { .. } => codes::LENGTH_MISMATCH,
        Error::NegativeDensity { .. } | Error::DensityMass { .. } | Error::ZeroMass => codes::NOT_A_DENSITY,
        _ => codes::FAILED,
    };
    Failure::new(code, err)
}

fn parse_exponent(s: &str) -> Result<Exponent, Failure> {
    s.parse().map_err(|e| Failure::new(codes::BAD_EXPONENT, e))
}

fn print_value(v: f64) {
    println!("{v:.12}");
}

fn cmd_norm(file: &Path, p: &str, plain: bool, input: &InputArgs) -> Result<(), Failure> {
    let p = parse_exponent(p)?;
    let x = input.read(file)?;
    print_value(if plain { p_norm(&x, p) } else { volterra_norm(&x, p) });
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_dist(
    a: &Path,
    b: &Path,
    p: Option<&str>,
    use_emd: bool,
    use_km: bool,
    plain: bool,
    renormalize: bool,
    input: &InputArgs,
) -> Result<(), Failure> {
    let p = p.map(parse_exponent).transpose()?;
    let x = input.read(a)?;
    let y = input.read(b)?;
    if x.len() != y.len() {
        return Err(distance_failure(Error::LengthMismatch { left: x.len(), right: y.len() }));
    }
    let value = if use_emd || use_km {
        let density = |s: Signal| {
            if renormalize {
                Density::renormalized(s.into_values())
            } else {
                Density::from_signal(s)
            }
        };
        let (dp, dq) = (density(x).map_err(distance_failure)?, density(y).map_err(distance_failure)?);
        if use_emd {
            emd(&dp, &dq)
        } else {
            km(&dp, &dq)
        }
    } else {
        let p = p.expect("clap requires --p without --emd/--km");
        if plain {
            p_distance(&x, &y, p)
        } else {
            volterra_distance(&x, &y, p)
        }
    }
    .map_err(distance_failure)?;
    print_value(value);
    Ok(())
}

fn load_config<T: serde::de::DeserializeOwned>(path: &Path) -> Result<(T, Value), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new(codes::PARSE, format!("{}: {e}", path.display())))?;
    let raw: Value =
        serde_json::from_str(&text).map_err(|e| Failure::new(codes::PARSE, format!("{}: {e}", path.display())))?;
    let cfg = serde_json::from_value(raw.clone())
        .map_err(|e| Failure::new(codes::PARSE, format!("{}: {e}", path.display())))?;
    Ok((cfg, raw))
}

fn run_experiment(kind: ExperimentKind, config: &Path) -> Result<(Vec<SweepResult>, Value), Failure> {
    // Errors past JSON decoding are still config problems (bad grid, clipping shift, ...).
    let config_error = |e: Error| Failure::new(codes::PARSE, e);
    match kind {
        ExperimentKind::Noise => {
            let (cfg, raw) = load_config::<NoiseConfig>(config)?;
            Ok((experiments::run_noise(&cfg).map_err(config_error)?, raw))
        }
        ExperimentKind::Shift => {
            let (cfg, raw) = load_config::<ShiftConfig>(config)?;
            Ok((experiments::shift_sweep(&cfg).map_err(config_error)?, raw))
        }
        ExperimentKind::Radon => {
            let (cfg, raw) = load_config::<RadonConfig>(config)?;
            Ok((experiments::run_radon(&cfg).map_err(config_error)?, raw))
        }
    }
}

fn cmd_experiment(
    kind: ExperimentKind,
    config: &Path,
    out: Option<&Path>,
    manifest: Option<&Path>,
) -> Result<(), Failure> {
    let start = Instant::now();
    let (rows, raw) = run_experiment(kind, config)?;
    let io_error = |e: Error| Failure::new(codes::FAILED, e);
    match out {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| Failure::new(codes::FAILED, format!("{}: {e}", path.display())))?;
            experiments::write_csv(&rows, BufWriter::new(file)).map_err(io_error)?;
        }
        None => experiments::write_csv(&rows, io::stdout().lock()).map_err(io_error)?,
    }
    let manifest_path = manifest.map(Path::to_path_buf).or_else(|| {
        out.map(|o| {
            let mut name = o.as_os_str().to_owned();
            name.push(".manifest.json");
            PathBuf::from(name)
        })
    });
    if let Some(path) = manifest_path {
        let m = Manifest {
            config: raw,
            git_describe: GIT_DESCRIBE.to_string(),
            wall_time_seconds: start.elapsed().as_secs_f64(),
        };
        let write = || -> io::Result<()> {
            let mut w = BufWriter::new(File::create(&path)?);
            serde_json::to_writer_pretty(&mut w, &m)?;
            writeln!(w)?;
            w.flush()
        };
        write().map_err(|e| Failure::new(codes::FAILED, format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_verify(n: usize, trials: usize, seed: u64, corrupt: bool) -> Result<(), Failure> {
    let cfg = VerifyConfig { max_n: n, trials, seed };
    let factor = if corrupt { 1.0 + 1e-6 } else { 1.0 };
    let reports = verify_with(&cfg, |x, y, p| volterra_distance(x, y, p).map(|d| d * factor))
        .map_err(|e| Failure::new(codes::PARSE, e))?;
    let mut ok = true;
    for r in &reports {
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        println!(
            "{verdict} {} checked={} failures={} worst={:e} tolerance={:e}",
            r.name, r.checked, r.failures, r.worst, r.tolerance
        );
        ok &= r.passed();
    }
    if ok {
        Ok(())
    } else {
        Err(Failure { code: codes::FAILED, message: "oracle disagreement".into() })
    }
}

/// Caps the global rayon pool at `VOLTERRA_THREADS` when set.
fn configure_threads() {
    let Ok(raw) = std::env::var("VOLTERRA_THREADS") else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(t) if t > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
                eprintln!("volterra: could not set thread count: {e}");
            }
        }
        _ => eprintln!("volterra: ignoring VOLTERRA_THREADS={raw:?}; expected a positive integer"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let result = match &cli.command {
        Command::Norm { file, p, plain, input } => cmd_norm(file, p, *plain, input),
        Command::Dist { a, b, p, emd, km, plain, renormalize, input } => {
            cmd_dist(a, b, p.as_deref(), *emd, *km, *plain, *renormalize, input)
        }
        Command::Experiment { kind, config, out, manifest } => {
            cmd_experiment(*kind, config, out.as_deref(), manifest.as_deref())
        }
        Command::Verify { n, trials, seed, corrupt_norm } => cmd_verify(*n, *trials, *seed, *corrupt_norm),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("volterra: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
