//! `willmore`: generate, verify and factorize from the command line.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use willmore_dpw::exec::Execution;

use crate::commands::FactorKind;
use crate::config::{parse_grid, parse_lambdas, parse_realform, ConfigError, JobConfig, MeshAxes, PotentialSource};

const EXIT_FATAL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_CELL: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Cell(String),
    #[error("{0}")]
    Fatal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Cell(_) => EXIT_CELL,
            Failure::Fatal(_) => EXIT_FATAL,
        }
    }
}

#[derive(Parser)]
#[command(name = "willmore", version, about = "Willmore surfaces from holomorphic potentials via the DPW method")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the surface on a grid and write samples as CSV (and optionally an OBJ mesh).
    Generate(JobArgs),
    /// Run invariant and oracle checks; exits 0 iff every check passes.
    Verify {
        #[command(flatten)]
        job: JobArgs,
        /// Skip the closed-form comparison for builtins that have one.
        #[arg(long)]
        no_oracle: bool,
        /// Check that the compact and noncompact closed-form frames share the normalized potential.
        #[arg(long)]
        duality: bool,
    },
    /// Factorize a loop file into two factor files plus a residual summary.
    Factorize {
        /// Loop file (JSON with a degree-indexed coefficient array).
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Iwasawa)]
        kind: Kind,
        #[arg(long, default_value = "noncompact")]
        realform: String,
        #[arg(long = "tol-iwasawa", default_value_t = 1e-10)]
        tol: f64,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Sample a closed-form oracle on a grid and write CSV.
    Oracle {
        /// `s6`, `rp2:M`, `minimal-r4`, `frame-compact` or `frame-noncompact`.
        #[arg(long)]
        oracle: String,
        #[command(flatten)]
        job: JobArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Iwasawa,
    Birkhoff,
}

#[derive(Args, Default)]
struct JobArgs {
    /// TOML config; its values override the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Potential file (JSON).
    #[arg(long, conflicts_with = "builtin")]
    potential: Option<PathBuf>,
    /// `s6`, `rp2:M`, `duality` or `zero:N`.
    #[arg(long)]
    builtin: Option<String>,
    /// `cx,cy,radius,nu,nv`.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Comma-separated angles of λ in radians.
    #[arg(long, allow_hyphen_values = true)]
    lambdas: Option<String>,
    /// `noncompact` or `compact`.
    #[arg(long)]
    realform: Option<String>,
    #[arg(long)]
    tol_iwasawa: Option<f64>,
    /// Tolerance of the verification checks.
    #[arg(long)]
    tol_check: Option<f64>,
    /// CSV output; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// OBJ mesh output.
    #[arg(long)]
    mesh: Option<PathBuf>,
    /// `a,b,c` (ambient coordinates) or `stereo:P[:a,b,c]`.
    #[arg(long)]
    mesh_axes: Option<String>,
    /// JSON report output.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Evaluate the grid on one thread.
    #[arg(long)]
    sequential: bool,
}

impl JobArgs {
    fn resolve(&self) -> Result<JobConfig, ConfigError> {
        let potential = match (&self.builtin, &self.potential) {
            (Some(b), _) => Some(PotentialSource::Builtin(b.clone())),
            (None, Some(p)) => Some(PotentialSource::File(p.clone())),
            (None, None) => None,
        };
        let mut cfg = JobConfig {
            potential,
            ..JobConfig::default()
        };
        if let Some(g) = &self.grid {
            cfg.grid = parse_grid(g)?;
        }
        if let Some(l) = &self.lambdas {
            cfg.lambdas = parse_lambdas(l)?;
        }
        if let Some(r) = &self.realform {
            cfg.realform = parse_realform(r)?;
        }
        cfg.tol_iwasawa = self.tol_iwasawa.unwrap_or(cfg.tol_iwasawa);
        cfg.tol_check = self.tol_check.unwrap_or(cfg.tol_check);
        if self.sequential {
            cfg.execution = Execution::Sequential;
        }
        cfg.csv = self.out.clone();
        cfg.mesh = self.mesh.clone();
        cfg.mesh_axes = self.mesh_axes.as_deref().map(MeshAxes::parse).transpose()?;
        cfg.report = self.report.clone();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Generate(job) => commands::generate(&job.resolve()?).map(|()| true),
        Command::Verify { job, no_oracle, duality } => commands::verify(&job.resolve()?, !no_oracle, duality),
        Command::Factorize {
            input,
            kind,
            realform,
            tol,
            out,
        } => {
            let kind = match kind {
                Kind::Iwasawa => FactorKind::Iwasawa,
                Kind::Birkhoff => FactorKind::Birkhoff,
            };
            commands::factorize(&input, kind, parse_realform(&realform)?, tol, &out).map(|()| true)
        }
        Command::Oracle { oracle, job } => commands::oracle(&job.resolve()?, &oracle).map(|()| true),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FATAL),
        Err(e) => {
            eprintln!("willmore: {e}");
            ExitCode::from(e.code())
        }
    }
}
