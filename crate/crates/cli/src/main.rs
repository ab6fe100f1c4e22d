//! `advdiff` command-line front end.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod output;

use output::Failure;

#[derive(Debug, Parser)]
#[command(name = "advdiff", version, about = "Advection-diffusion moisture transfer solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// March a problem to its horizon and write the solution and probe series.
    Simulate {
        #[command(flatten)]
        problem: ProblemArgs,
    },
    /// Observed order of accuracy over a sweep of grid spacings or steps.
    Converge {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Quantity swept: `dx` or `dt`.
        #[arg(long)]
        vary: String,
        /// Comma-separated sweep values (at least three, distinct).
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        /// Reference refinement in space (dx sweeps).
        #[arg(long)]
        ref_space: Option<usize>,
        /// Reference refinement in time.
        #[arg(long)]
        ref_time: Option<usize>,
    },
    /// Parameter-scaled sensitivity of the relative humidity at the probes.
    Sensitivity {
        #[command(flatten)]
        problem: ProblemArgs,
        /// `d_m` or `peclet`.
        #[arg(long)]
        param: String,
        #[arg(long, default_value_t = advdiff::analysis::DEFAULT_DELTA)]
        delta: f64,
    },
    /// Estimate a constant or piecewise-constant Péclet number from measurements.
    FitPeclet {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Measurement CSV with header `t,x,phi[,T]`.
        #[arg(long)]
        data: PathBuf,
        /// Segment boundaries `t0,...,tk` for a piecewise fit.
        #[arg(long, value_delimiter = ',')]
        segments: Option<Vec<f64>>,
        /// Search interval `lo,hi`.
        #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [0.0, 4.0])]
        bounds: Vec<f64>,
    },
    /// Steady state for constant forcing.
    Steady {
        #[command(flatten)]
        problem: ProblemArgs,
    },
    /// Synthetic measurements sampled from a simulation, with Gaussian noise.
    GenData {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
        /// Sampling period, in the units of the written stamps.
        #[arg(long)]
        period: f64,
    },
    /// Write the problem as a JSON document.
    Export {
        #[command(flatten)]
        problem: ProblemArgs,
    },
}

/// Problem source and discretisation overrides shared by every command.
#[derive(Debug, Clone, Args)]
#[group(skip)]
struct ProblemArgs {
    /// Built-in case: linear_s4, nonlinear_s5 or gypsum_s6.
    #[arg(long, required_unless_present = "config", conflicts_with = "config")]
    case: Option<String>,
    /// JSON problem file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Accept a `dimensional` config block; data stamps are then in s and m.
    #[arg(long)]
    dimensional: bool,
    #[arg(long, default_value = "sg")]
    scheme: String,
    #[arg(long)]
    dx: Option<f64>,
    /// Fixed step, or synchronisation interval with --adaptive.
    #[arg(long)]
    dt: Option<f64>,
    /// CFL-limited steps inside each synchronisation interval.
    #[arg(long)]
    adaptive: bool,
    #[arg(long)]
    horizon: Option<f64>,
    /// Store every k-th layer.
    #[arg(long)]
    decimation: Option<usize>,
    /// Constant Péclet number, or one value per --peclet-segments interval.
    #[arg(long, value_delimiter = ',')]
    peclet: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    peclet_segments: Option<Vec<f64>>,
    /// Probe positions; defaults to the case probes.
    #[arg(long, value_delimiter = ',')]
    probes: Option<Vec<f64>>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Simulate { problem } => commands::simulate(&problem),
        Command::Converge { problem, vary, values, ref_space, ref_time } => {
            commands::converge(&problem, &vary, &values, ref_space, ref_time)
        }
        Command::Sensitivity { problem, param, delta } => commands::sensitivity(&problem, &param, delta),
        Command::FitPeclet { problem, data, segments, bounds } => {
            commands::fit_peclet(&problem, &data, segments.as_deref(), (bounds[0], bounds[1]))
        }
        Command::Steady { problem } => commands::steady(&problem),
        Command::GenData { problem, sigma, period } => commands::gen_data(&problem, sigma, period),
        Command::Export { problem } => commands::export(&problem),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(output::USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("advdiff: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
