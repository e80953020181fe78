//! The `kinetx` command line.
//!
//! Every subcommand reads an optional JSON [`RunConfig`], applies flag
//! overrides, writes CSV data (to `--out` or standard output) and prints a
//! one-line `key=value` summary.
//!
//! Exit codes: 0 ok, 1 numeric or I/O failure, 2 invalid input,
//! 3 validation failure.

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{OracleKind, QuartetBlock, RatesBlock, RunConfig, SpecBlock, SpeciesBlock};
pub use output::{format_number, parse_summary, Summary};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Numeric(_) | CliError::Io(_) => EXIT_NUMERIC,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "kinetx",
    version,
    about = "Kinetics of reversible reactions A + B <-> C + D"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form X_C(t) on a time grid.
    Solve(RunArgs),
    /// Iterates of the one-step map, X_C(m tau) for m = 0..M.
    Iterate(RunArgs),
    /// Equilibrium concentration and ratio.
    Equilibrium(RunArgs),
    /// Characteristic time.
    Chartime(RunArgs),
    /// Compare the closed form against an RK4 or stochastic oracle.
    Validate(RunArgs),
    /// Detailed-balance and cross-section checks for a species quartet.
    Statmech(RunArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub x0: Option<f64>,
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,
    /// Number of grid points on [0, t_end].
    #[arg(long)]
    pub steps: Option<usize>,
    /// Number of map iterations.
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long, value_enum)]
    pub oracle: Option<OracleKind>,
    #[arg(long = "n-particles")]
    pub n_particles: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// RK4 step.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Max deviation for rk4, number of standard errors for gillespie.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Evaluate the statmech quartet with hbar = k_B = 1.
    #[arg(long = "natural-units")]
    pub natural_units: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    /// Loads the config file (if any) and applies flag overrides.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        cfg.override_rates(self.a, self.b)?;
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field.clone() { cfg.$field = Some(v); })*
            };
        }
        take!(
            x0,
            t_end,
            steps,
            m,
            oracle,
            n_particles,
            trials,
            seed,
            dt,
            tolerance,
            out
        );
        if self.t_end.is_some() || self.steps.is_some() {
            cfg.times = None;
        }
        if self.natural_units {
            match cfg.quartet.as_mut() {
                Some(q) => q.natural_units = true,
                None => {
                    return Err(CliError::Invalid(
                        "--natural-units needs a `quartet` block".into(),
                    ))
                }
            }
        }
        Ok(cfg)
    }
}

/// What a command produced: a summary line and whether it passed.
pub struct Outcome {
    pub summary: Summary,
    pub exit_code: i32,
    /// CSV data went to standard output, so the summary goes to standard
    /// error to keep the data stream parseable.
    pub data_on_stdout: bool,
}

type Handler = fn(&RunConfig, &mut dyn Write) -> Result<Outcome, CliError>;

pub fn execute(command: &Command, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    let (args, run): (&RunArgs, Handler) = match command {
        Command::Solve(a) => (a, commands::solve),
        Command::Iterate(a) => (a, commands::iterate),
        Command::Equilibrium(a) => (a, commands::equilibrium),
        Command::Chartime(a) => (a, commands::chartime),
        Command::Validate(a) => (a, commands::validate),
        Command::Statmech(a) => (a, commands::statmech),
    };
    let cfg = args.resolve()?;
    run(&cfg, stdout)
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Summaries go to `stdout`, diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&cli.command, stdout) {
        Ok(outcome) => {
            let target: &mut dyn Write = if outcome.data_on_stdout { stderr } else { stdout };
            let _ = writeln!(target, "{}", outcome.summary);
            outcome.exit_code
        }
        Err(e) => {
            let _ = writeln!(stderr, "kinetx: {}", e.to_string().replace('\n', " "));
            e.exit_code()
        }
    }
}
