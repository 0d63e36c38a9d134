//! `cvclone` — batch driver for the coherent-state cloning laboratory.
//!
//! Subcommands reproduce the headline numbers (`golden`), sweep the optimal
//! fidelity tradeoff curve (`tradeoff`, `truncation`), contract the joint
//! fidelity operator (`joint`), demonstrate the classical bound
//! (`classical`) and cross-validate the operator picture against the
//! three-mode circuit (`optical-verify`). All outputs are deterministic for
//! a fixed configuration.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

fn parse_tolerance(s: &str) -> Result<f64, String> {
    let tol: f64 = s.parse().map_err(|e| format!("not a number: {e}"))?;
    if tol <= 0.0 || tol > 1e-4 {
        return Err("tolerance must lie in (0, 1e-4]".into());
    }
    Ok(tol)
}

fn parse_cutoff(s: &str) -> Result<usize, String> {
    let c: usize = s.parse().map_err(|e| format!("not an integer: {e}"))?;
    if c < 4 {
        return Err("cutoff must be at least 4".into());
    }
    Ok(c)
}

#[derive(Args, Debug)]
struct IoArgs {
    /// Output file; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct SolverArgs {
    /// Residual tolerance of the eigensolver, in (0, 1e-4]
    #[arg(long, default_value = "1e-10", value_parser = parse_tolerance)]
    tol: f64,
    /// Iteration budget of the eigensolver
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
}

#[derive(Parser, Debug)]
#[command(name = "cvclone", version, about = "Coherent-state cloning laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep the optimal single-clone fidelity tradeoff curve
    Tradeoff {
        /// Per-mode photon cutoff of the two-mode space
        #[arg(long, default_value = "24", value_parser = parse_cutoff)]
        cutoff: usize,
        /// Explicit weight grid "l1,l2;l1,l2;..."; default grid when omitted
        #[arg(long)]
        weights: Option<String>,
        /// Extra endpoint ratios "r1,r2,..." appended to the grid as
        /// normalized weight pairs (l2/l1 = r)
        #[arg(long)]
        ratios: Option<String>,
        /// Also emit the closed-form optimal Gaussian baseline per weight
        #[arg(long)]
        gaussian_baseline: bool,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Reproduce every headline number and report pass/fail per check
    Golden {
        /// Two-mode eigenproblem cutoff
        #[arg(long, default_value = "24", value_parser = parse_cutoff)]
        cutoff: usize,
        /// Three-mode circuit cutoff
        #[arg(long, default_value = "14", value_parser = parse_cutoff)]
        circuit_cutoff: usize,
        /// Seed of the randomized check sets
        #[arg(long, default_value_t = 0xC0FFEE)]
        seed: u64,
        #[command(flatten)]
        solver: SolverArgs,
        /// Output file; stdout when omitted
        #[arg(long)]
        output: Option<PathBuf>,
        /// Output format (the report is JSON by default)
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Fidelity of the photon-number-truncated optimal cloners
    Truncation {
        #[arg(long, default_value = "24", value_parser = parse_cutoff)]
        cutoff: usize,
        /// Photon-number caps, e.g. "0,2,4,6"
        #[arg(long, default_value = "0,2,4,6,8,10,12")]
        max_photons: String,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Contract the joint-fidelity operator and report its spectrum data
    Joint {
        /// Three-mode circuit cutoff
        #[arg(long, default_value = "14", value_parser = parse_cutoff)]
        circuit_cutoff: usize,
        /// Ancilla block cutoff; defaults to half the circuit cutoff
        #[arg(long)]
        block_cutoff: Option<usize>,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Demonstrate the classical 1-to-infinity bound of 1/2
    Classical {
        /// Cutoff of the randomized state space
        #[arg(long, default_value = "10", value_parser = parse_cutoff)]
        cutoff: usize,
        /// Number of random states probed against the bound
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0xC0FFEE)]
        seed: u64,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Cross-validate operator-picture fidelities against circuit runs
    #[command(name = "optical-verify")]
    OpticalVerify {
        /// Three-mode circuit cutoff
        #[arg(long, default_value = "14", value_parser = parse_cutoff)]
        circuit_cutoff: usize,
        /// Displacements to probe covariance at, e.g. "0,0.3,0.5i"
        #[arg(long, default_value = "0,0.3,0.5i")]
        alphas: String,
        /// Largest tolerated fidelity deviation (covariance and
        /// operator-vs-circuit agreement)
        #[arg(long, default_value_t = 2e-3)]
        max_deviation: f64,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        io: IoArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Tradeoff {
            cutoff,
            weights,
            ratios,
            gaussian_baseline,
            solver,
            io,
        } => commands::tradeoff(cutoff, weights, ratios, gaussian_baseline, &solver, &io),
        Command::Golden {
            cutoff,
            circuit_cutoff,
            seed,
            solver,
            output,
            format,
        } => commands::golden(cutoff, circuit_cutoff, seed, &solver, &output, format),
        Command::Truncation {
            cutoff,
            max_photons,
            io,
        } => commands::truncation(cutoff, &max_photons, &io),
        Command::Joint {
            circuit_cutoff,
            block_cutoff,
            io,
        } => commands::joint(circuit_cutoff, block_cutoff, &io),
        Command::Classical {
            cutoff,
            samples,
            seed,
            io,
        } => commands::classical(cutoff, samples, seed, &io),
        Command::OpticalVerify {
            circuit_cutoff,
            alphas,
            max_deviation,
            solver,
            io,
        } => commands::optical_verify(circuit_cutoff, &alphas, max_deviation, &solver, &io),
    };
    match outcome {
        Ok(clean) => {
            if clean {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
