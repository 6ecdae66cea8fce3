//! `planckian`: bound evaluations and figure data as CSV or JSON.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 bad arguments, 3 numerical
//! failure (including a detected speed-limit violation).

mod commands;
mod dataset;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{Common, ConstantArgs, DecayingArgs};
use dataset::Dataset;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(planckian::Error),
    Io(io::Error),
}

impl From<planckian::Error> for CliError {
    fn from(e: planckian::Error) -> Self {
        CliError::Numerical(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "invalid arguments: {m}"),
            CliError::Numerical(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct Global {
    /// Inverse temperature, used to report times in natural units.
    #[arg(long, global = true, default_value_t = 1.0)]
    beta: f64,
    /// Recorded in the metadata; every command is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Parser, Debug)]
#[command(name = "planckian", version, about = "Planckian time bounds for thermalizing machines")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimized lower bound on the χ factor versus p*, one curve per ε.
    FigBounds {
        /// Error tolerances as fractions of π/4.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        eps: Option<Vec<f64>>,
        /// Number of interior p* points.
        #[arg(long, default_value_t = 199)]
        pstar_grid: usize,
    },
    /// Single-parameter metrology bounds versus the ground-state population.
    FigQfi {
        #[arg(long, default_value_t = 199)]
        grid: usize,
        /// Dimensions for the gapped-spectrum curves.
        #[arg(long = "dim", value_delimiter = ',', num_args = 1..)]
        dims: Option<Vec<usize>>,
    },
    /// χ lower bound at p* = ½ across ε in [0, π/4].
    Tradeoff {
        #[arg(long, default_value_t = 50)]
        grid: usize,
    },
    /// Thermalization times of the constant-coupling level.
    RlmConstant {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        e1: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        e2: f64,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        p0: Option<Vec<f64>>,
        /// Fractions of π/4.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        eps: Option<Vec<f64>>,
        /// Coupling strengths.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        g: Option<Vec<f64>>,
        /// Emit the long-time distance surface over (E, g) instead.
        #[arg(long)]
        surface: bool,
        /// Points per axis for --surface.
        #[arg(long, default_value_t = 20)]
        grid: usize,
    },
    /// Trajectories under the decaying coupling against the speed limit.
    RlmDecaying {
        #[arg(long, allow_hyphen_values = true, requires = "e2")]
        e1: Option<f64>,
        #[arg(long, allow_hyphen_values = true, requires = "e1")]
        e2: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 0.01)]
        b: f64,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        p0: Option<Vec<f64>>,
        #[arg(long, default_value_t = 2.0)]
        tmax: f64,
        #[arg(long, default_value_t = 200)]
        grid: usize,
    },
    /// Pairwise χ for the qubits diag(0, e1) and diag(0, e2).
    Chi {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        e1: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        e2: f64,
        /// Fractions of π/4.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        eps: Option<Vec<f64>>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::FigBounds { .. } => "fig-bounds",
            Command::FigQfi { .. } => "fig-qfi",
            Command::Tradeoff { .. } => "tradeoff",
            Command::RlmConstant { surface: false, .. } => "rlm-constant",
            Command::RlmConstant { surface: true, .. } => "rlm-constant --surface",
            Command::RlmDecaying { .. } => "rlm-decaying",
            Command::Chi { .. } => "chi",
        }
    }
}

fn build(cli: &Cli) -> Result<Dataset, CliError> {
    let g = &cli.global;
    if !(g.beta > 0.0 && g.beta.is_finite()) {
        return Err(CliError::Usage(format!("--beta {} must be positive and finite", g.beta)));
    }
    let common = Common { command: cli.command.name(), beta: g.beta, seed: g.seed };
    match &cli.command {
        Command::FigBounds { eps, pstar_grid } => {
            commands::fig_bounds(&common, eps.as_deref().unwrap_or(&commands::DEFAULT_FIG_EPS), *pstar_grid)
        }
        Command::FigQfi { grid, dims } => {
            commands::fig_qfi(&common, *grid, dims.as_deref().unwrap_or(&commands::DEFAULT_DIMS))
        }
        Command::Tradeoff { grid } => commands::tradeoff(&common, *grid),
        Command::RlmConstant { surface: true, grid, .. } => commands::rlm_constant_surface(&common, *grid),
        Command::RlmConstant { e1, e2, p0, eps, g, .. } => commands::rlm_constant(
            &common,
            &ConstantArgs {
                e1: *e1,
                e2: *e2,
                p0: p0.as_deref().unwrap_or(&[0.5]),
                eps: eps.as_deref().unwrap_or(&commands::DEFAULT_RLM_EPS),
                couplings: g.as_deref().unwrap_or(&commands::DEFAULT_COUPLINGS),
            },
        ),
        Command::RlmDecaying { e1, e2, a, b, p0, tmax, grid } => {
            let custom;
            let pairs: &[(f64, f64)] = match (e1, e2) {
                (Some(x), Some(y)) => {
                    custom = [(*x, *y)];
                    &custom
                }
                _ => &commands::DEFAULT_DECAYING_PAIRS,
            };
            commands::rlm_decaying(
                &common,
                &DecayingArgs {
                    pairs,
                    a: *a,
                    b: *b,
                    p0: p0.as_deref().unwrap_or(&[0.0, 0.5, 1.0]),
                    tmax: *tmax,
                    grid: *grid,
                },
            )
        }
        Command::Chi { e1, e2, eps } => commands::chi(&common, *e1, *e2, eps.as_deref().unwrap_or(&[0.0])),
    }
}

fn emit(data: &Dataset, global: &Global) -> Result<(), CliError> {
    let mut out: Box<dyn Write> = match &global.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match global.format {
        Format::Csv => data.write_csv(&mut out)?,
        Format::Json => data.write_json(&mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match build(&cli).and_then(|d| emit(&d, &cli.global)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("planckian: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
