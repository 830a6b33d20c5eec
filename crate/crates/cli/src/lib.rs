//! Command-line driver for `kneadlab-core`.
//!
//! Every subcommand maps onto one library operation and writes a table as
//! CSV (default) or JSON, to standard output or `--out`. Parameters may also
//! come from the `[run]` table of a `--config` TOML file; flags win.
//!
//! Exit codes: `0` success, `1` domain failure or negative verdict, `2`
//! configuration, usage or output error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use config::RunConfig;
pub use error::CliError;
pub use output::{format_g17, Format, Table};

#[derive(Debug, Parser)]
#[command(name = "kneadlab", version, about = "Kneading, combinatorial equivalence and basin diagnostics for toy-model skew products")]
pub struct Cli {
    /// TOML file with [model.<name>] tables and [run] defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the standing hypotheses on a model.
    Validate(ValidateArgs),
    /// Kneading sequences of the critical line on a base grid.
    Kneading(KneadingArgs),
    /// Compare kneading sequences of two models.
    Equiv(EquivArgs),
    /// Sample the base conjugacy between two Cantor maps.
    Psi(PsiArgs),
    /// Labeled turning-point preimages on one fiber.
    Partition(PartitionArgs),
    /// Labeled preimage curve across fibers.
    Curve(CurveArgs),
    /// Depth-n conjugacy table and piecewise-linear samples.
    Conjugacy(ConjugacyArgs),
    /// Sup distance between the piecewise-linear conjugacies at two depths.
    Converge(ConvergeArgs),
    /// Equicontinuity modulus of the preimage sets.
    Equicont(EquicontArgs),
    /// Largest partition gap by depth.
    Density(DensityArgs),
    /// Periodic orbits up to a given period.
    Orbits(OrbitsArgs),
    /// Basin check for strongly attracting orbits.
    Singer(SingerArgs),
    /// Derivative cocycle along an orbit segment.
    Cocycle(CocycleArgs),
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub grid_density: Option<usize>,
}

#[derive(Debug, Args)]
pub struct KneadingArgs {
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Number of base grid points.
    #[arg(long)]
    pub grid: Option<usize>,
    /// A single fiber instead of the grid.
    #[arg(long)]
    pub y: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EquivArgs {
    #[arg(long)]
    pub model_a: Option<String>,
    #[arg(long)]
    pub model_b: Option<String>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PsiArgs {
    /// Source model; its Cantor map is used unless --from is given.
    #[arg(long)]
    pub model_a: Option<String>,
    #[arg(long)]
    pub model_b: Option<String>,
    /// Source Cantor map as `a,b`.
    #[arg(long, value_delimiter = ',')]
    pub from: Option<Vec<f64>>,
    /// Target Cantor map as `a,b`.
    #[arg(long, value_delimiter = ',')]
    pub to: Option<Vec<f64>>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long)]
    pub depth: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub word: Option<String>,
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ConjugacyArgs {
    #[arg(long)]
    pub model_a: Option<String>,
    #[arg(long)]
    pub model_b: Option<String>,
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Number of piecewise-linear samples on [-1, 1].
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long)]
    pub model_a: Option<String>,
    #[arg(long)]
    pub model_b: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub grid_x: Option<usize>,
    #[arg(long)]
    pub grid_y: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EquicontArgs {
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub deltas: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub depths: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct OrbitsArgs {
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub m_max: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SingerArgs {
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub m_max: Option<usize>,
    #[arg(long)]
    pub expansion_steps: Option<usize>,
    /// Only orbits with this word.
    #[arg(long)]
    pub word: Option<String>,
}

#[derive(Debug, Args)]
pub struct CocycleArgs {
    #[arg(long)]
    pub model: Option<String>,
    /// Fiber coordinate; `0-` and `0+` select a turning point.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long)]
    pub m: Option<usize>,
}

/// What a subcommand produced.
pub enum Body {
    Table(Table),
    Text(String),
}

pub struct Report {
    pub body: Body,
    /// `0`, or `1` for a negative verdict.
    pub status: i32,
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("kneadlab: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let format: Option<String> = cfg.pick_opt(cli.format.map(|f| format!("{f:?}").to_lowercase()), "format")?;
    let format = match format.as_deref() {
        None => None,
        Some("csv") => Some(Format::Csv),
        Some("json") => Some(Format::Json),
        Some(other) => return Err(CliError::config("run.format", format!("unknown format '{other}'"))),
    };
    let out: Option<PathBuf> = cfg.pick_opt(cli.out.clone(), "out")?;

    let report = commands::dispatch(&cli.command, &cfg, format.is_some())?;
    let write_to = |w: &mut dyn Write| -> std::io::Result<()> {
        match &report.body {
            Body::Table(t) => t.write(format.unwrap_or(Format::Csv), w),
            Body::Text(s) => writeln!(w, "{s}"),
        }
    };
    match &out {
        Some(path) => {
            let io_err = |source| CliError::Output {
                path: path.display().to_string(),
                source,
            };
            let mut file = std::io::BufWriter::new(std::fs::File::create(path).map_err(io_err)?);
            write_to(&mut file).map_err(io_err)?;
            file.flush().map_err(io_err)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_to(&mut lock).map_err(|source| CliError::Output {
                path: "<stdout>".into(),
                source,
            })?;
        }
    }
    Ok(report.status)
}
