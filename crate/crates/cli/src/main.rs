//! `thzlink`: parameter sweeps, single-point evaluation and cross-validation.

mod config;
mod eval;
mod sweep;
mod validate;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thz_core::montecarlo::SimConfig;

use config::{parse_methods, Config, ALL_METHODS};
use validate::Verdict;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
}

#[derive(Parser)]
#[command(name = "thzlink", version, about = "THz link performance under alpha-mu fading, pointing errors and hardware impairment")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one parameter and write `axis,method,value,stderr,diag` CSV.
    Sweep(Common),
    /// Evaluate every metric with every method at the configured point.
    Point(Common),
    /// Compare Mellin-Barnes, quadrature and Monte Carlo; exit 0 only on full pass.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Directory of `.fxh` fixtures to regenerate and compare.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Comma-separated subset of foxh, quadrature, montecarlo, asymptotic.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    workers: Option<usize>,
}

impl Common {
    fn load(&self) -> Result<(Config, SimConfig), CliError> {
        let cfg = Config::load(&self.config)?;
        let mut sim = SimConfig::new(self.samples.unwrap_or(cfg.samples), self.seed.unwrap_or(cfg.seed))
            .map_err(|e| CliError::Config(format!("simulation: {e}")))?;
        if let Some(b) = cfg.batch {
            sim = sim.with_batch(b).map_err(|e| CliError::Config(format!("simulation: {e}")))?;
        }
        Ok((cfg, sim))
    }

    fn pool(&self) -> Result<rayon::ThreadPool, CliError> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.workers {
            if n == 0 {
                return Err(CliError::Usage("--workers must be positive".into()));
            }
            b = b.num_threads(n);
        }
        b.build().map_err(|e| CliError::Usage(e.to_string()))
    }

    fn sink(&self) -> Result<Box<dyn Write>, CliError> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
            )),
            None => Box::new(io::stdout().lock()),
        })
    }
}

/// Exit status: success, or computation failure.
enum Outcome {
    Ok,
    Failed(usize),
}

fn sweep(c: &Common) -> Result<Outcome, CliError> {
    let (cfg, sim) = c.load()?;
    let spec = cfg.sweep(c.methods.as_deref())?;
    let rows = c.pool()?.install(|| sweep::run_sweep(&cfg.point, &spec, &sim));
    sweep::write_csv(c.sink()?, "axis", &rows)?;
    let failed = rows.iter().filter(|r| r.cell.is_failure()).count();
    Ok(if failed == 0 { Outcome::Ok } else { Outcome::Failed(failed) })
}

fn point(c: &Common) -> Result<Outcome, CliError> {
    let (cfg, sim) = c.load()?;
    let methods = match &c.methods {
        Some(list) => parse_methods(list).map_err(CliError::Usage)?,
        None => ALL_METHODS.to_vec(),
    };
    let rows = c.pool()?.install(|| sweep::run_point(&cfg.point, &methods, &sim));
    sweep::write_csv(c.sink()?, "metric", &rows)?;
    let failed = rows.iter().filter(|r| r.cell.is_failure()).count();
    Ok(if failed == 0 { Outcome::Ok } else { Outcome::Failed(failed) })
}

fn validate(c: &Common, fixtures: Option<&Path>) -> Result<Outcome, CliError> {
    let (cfg, sim) = c.load()?;
    let mut checks = c.pool()?.install(|| validate::cross_checks(&cfg.point, &sim));
    if let Some(dir) = fixtures {
        checks.extend(validate::fixture_checks(dir)?);
    }
    validate::write_report(c.sink()?, &checks)?;
    let failed = checks.iter().filter(|c| c.verdict == Verdict::Fail).count();
    for ch in checks.iter().filter(|c| c.verdict == Verdict::Fail) {
        eprintln!("FAIL {}: {}", ch.name, ch.note);
    }
    Ok(if failed == 0 { Outcome::Ok } else { Outcome::Failed(failed) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sweep(c) => sweep(c),
        Command::Point(c) => point(c),
        Command::Validate { common, fixtures } => validate(common, fixtures.as_deref()),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed(n)) => {
            eprintln!("{n} failure(s)");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
