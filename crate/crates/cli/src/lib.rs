//! Command-line front end for the two-electron confinement engine.
//!
//! Exit codes: 0 on success, 1 for bad input (flags, config, unwritable
//! output), 2 when the numerics fail.

pub mod commands;
pub mod config;
pub mod table;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use config::{Command, DerivativeChoice, RawConfig};
use qdent_core::InteractionKind;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<qdent_core::Error> for CliError {
    fn from(e: qdent_core::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "qdent", version, about = "Two electrons in a two-center power-exponential potential")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Ground state at one (R, p): E, gap, <U>, L and |Psi(0,0)|^2
    #[command(allow_negative_numbers = true)]
    Solve,
    /// Records over an R grid for each p
    #[command(allow_negative_numbers = true)]
    Sweep,
    /// Diagonal and antidiagonal density cuts
    #[command(allow_negative_numbers = true)]
    Cuts,
    /// Psi(x1, x2) on a square grid
    #[command(allow_negative_numbers = true)]
    Wavefunction,
    /// E and L against basis size and oscillator frequency
    #[command(allow_negative_numbers = true)]
    Converge,
    /// Largest |dL/dR| per p in a window around the hard-wall minimum
    #[command(allow_negative_numbers = true)]
    QptScan,
    /// Nanostructure label for (R, p)
    #[command(allow_negative_numbers = true)]
    Classify,
}

impl Sub {
    fn command(&self) -> Command {
        match self {
            Sub::Solve => Command::Solve,
            Sub::Sweep => Command::Sweep,
            Sub::Cuts => Command::Cuts,
            Sub::Wavefunction => Command::Wavefunction,
            Sub::Converge => Command::Converge,
            Sub::QptScan => Command::QptScan,
            Sub::Classify => Command::Classify,
        }
    }
}

#[derive(Debug, Args, Default)]
pub struct Options {
    /// Flat key = value file; flags override its entries
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print the resolved configuration and exit
    #[arg(long, global = true)]
    pub dump_config: bool,
    /// Potential range R
    #[arg(long = "R", global = true)]
    pub r: Option<f64>,
    /// Power exponent p
    #[arg(long, global = true)]
    pub p: Option<f64>,
    /// Well depth
    #[arg(long, global = true)]
    pub v0: Option<f64>,
    /// Half distance between centers
    #[arg(long, global = true)]
    pub d: Option<f64>,
    /// contact | soft_coulomb
    #[arg(long, global = true)]
    pub interaction: Option<InteractionKind>,
    #[arg(long, global = true)]
    pub n_basis: Option<usize>,
    #[arg(long, global = true)]
    pub omega: Option<f64>,
    /// Cap on sweep worker threads
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output table path
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub r_min: Option<f64>,
    #[arg(long, global = true)]
    pub r_max: Option<f64>,
    #[arg(long, global = true)]
    pub r_step: Option<f64>,
    /// Add a 0.01 grid inside R in [7.5, 9.5]
    #[arg(long, global = true)]
    pub refine: bool,
    #[arg(long, global = true, value_delimiter = ',')]
    pub p_values: Option<Vec<f64>>,
    /// off | auxiliary | grid
    #[arg(long, global = true)]
    pub derivative: Option<DerivativeChoice>,
    #[arg(long, global = true)]
    pub derivative_step: Option<f64>,
    /// One-sided differences at the ends of a grid sweep
    #[arg(long, global = true)]
    pub one_sided_edges: bool,
    #[arg(long, global = true, value_delimiter = ',')]
    pub n_values: Option<Vec<usize>>,
    #[arg(long, global = true, value_delimiter = ',')]
    pub omega_values: Option<Vec<f64>>,
    #[arg(long, global = true)]
    pub axis_half_width: Option<f64>,
    #[arg(long, global = true)]
    pub axis_points: Option<usize>,
    /// Also solve on a real-space grid and compare
    #[arg(long, global = true)]
    pub with_oracle: bool,
    #[arg(long, global = true)]
    pub oracle_points: Option<usize>,
}

impl Options {
    fn raw(&self) -> RawConfig {
        let flag = |b: bool| b.then_some(true);
        RawConfig {
            v0: self.v0,
            d: self.d,
            r: self.r,
            p: self.p,
            interaction: self.interaction,
            n_basis: self.n_basis,
            omega: self.omega,
            threads: self.threads,
            out: self.out.clone(),
            r_min: self.r_min,
            r_max: self.r_max,
            r_step: self.r_step,
            refine: flag(self.refine),
            p_values: self.p_values.clone(),
            derivative: self.derivative,
            derivative_step: self.derivative_step,
            one_sided_edges: flag(self.one_sided_edges),
            n_values: self.n_values.clone(),
            omega_values: self.omega_values.clone(),
            axis_half_width: self.axis_half_width,
            axis_points: self.axis_points,
            with_oracle: flag(self.with_oracle),
            oracle_points: self.oracle_points,
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let file = match &cli.opts.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            RawConfig::parse(&text)?
        }
        None => RawConfig::default(),
    };
    let command = cli.command.command();
    let cfg = cli.opts.raw().over(file).resolve(command)?;
    if cli.opts.dump_config {
        write!(out, "{}", cfg.dump())?;
        return Ok(());
    }
    log::info!("{} with N={} omega={}", command.name(), cfg.n_basis, cfg.omega);
    commands::execute(command, &cfg, out)
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code. Errors and usage text go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
