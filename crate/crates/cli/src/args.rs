//! Command-line grammar and per-verb flag validation.

use std::path::PathBuf;
use std::str::FromStr;

use aoi_core::sim::{Capacity, TieRule};
use aoi_core::SystemSize;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "aoi", version, about = "Discrete age of information for Bernoulli/geometric FCFS status-update queues")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form AoI pmf for n = 1..nmax.
    Pmf(DistArgs),
    /// Closed-form AoI cdf for n = 1..nmax.
    Cdf(DistArgs),
    /// Closed-form mean AoI, optionally with the continuous M/M/1 baseline.
    Mean(MeanArgs),
    /// Solve the truncated age chain and dump its AoI marginal.
    Chain(ChainArgs),
    /// Slot-level simulation for any capacity.
    Simulate(SimulateArgs),
    /// gamma-scaled mean AoI over an intensity grid, discrete and continuous.
    Sweep(SweepArgs),
    /// Intensity minimizing the mean AoI, or `decreasing`.
    OptimalRho(OptimalRhoArgs),
    /// Cross-check closed forms, chain oracle and simulator.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file (atomically) instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Decimal places in emitted values.
    #[arg(long, default_value_t = 6)]
    pub precision: usize,
}

impl OutputArgs {
    pub fn format_or_csv(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }

    pub fn format_or_json(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }
}

/// `--size` value: `1`, `inf`, or a positive integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeArg {
    One,
    Infinite,
    Finite(u64),
}

impl FromStr for SizeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "inf" | "infinite" => Ok(SizeArg::Infinite),
            "1" => Ok(SizeArg::One),
            other => match other.parse::<u64>() {
                Ok(c) if c > 1 => Ok(SizeArg::Finite(c)),
                _ => Err(format!("{other:?} is not 1, inf, or a positive integer")),
            },
        }
    }
}

impl SizeArg {
    /// Closed-form sizes only.
    pub fn closed_form(self) -> Result<SystemSize, String> {
        match self {
            SizeArg::One => Ok(SystemSize::One),
            SizeArg::Infinite => Ok(SystemSize::Infinite),
            SizeArg::Finite(c) => Err(format!(
                "closed forms exist only for sizes 1 and inf, got {c}; use `simulate` for finite sizes"
            )),
        }
    }

    pub fn capacity(self) -> Capacity {
        match self {
            SizeArg::One => Capacity::Finite(1),
            SizeArg::Infinite => Capacity::Unbounded,
            SizeArg::Finite(c) => Capacity::Finite(c),
        }
    }
}

fn probability(s: &str) -> Result<f64, String> {
    let value: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(format!("{value} is outside the open interval (0, 1)"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let value: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(format!("{value} must be positive"))
    }
}

fn tie_rule(s: &str) -> Result<TieRule, String> {
    s.parse().map_err(|e: aoi_core::AoiError| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Per-slot arrival probability.
    #[arg(long, value_parser = probability)]
    pub p: f64,
    /// Per-slot service-completion probability.
    #[arg(long, value_parser = probability)]
    pub gamma: f64,
}

#[derive(Debug, Clone, Args)]
pub struct DistArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub size: SizeArg,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub nmax: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MeanArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub size: SizeArg,
    /// Also print the continuous-time baseline for `--mu` and `--rho`.
    #[arg(long, requires_all = ["mu", "rho"])]
    pub continuous: bool,
    #[arg(long, value_parser = positive)]
    pub mu: Option<f64>,
    #[arg(long, value_parser = positive)]
    pub rho: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ChainArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Truncation horizon N of the chain.
    #[arg(long, default_value_t = 300, value_parser = clap::value_parser!(u64).range(10..))]
    pub nmax: u64,
    /// Dump every state (n, m, probability) instead of the AoI marginal.
    #[arg(long)]
    pub full: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// System capacity: a positive integer or `inf`.
    #[arg(long, alias = "size", default_value = "inf")]
    pub capacity: SizeArg,
    #[arg(long, default_value_t = aoi_core::sim::DEFAULT_SLOTS)]
    pub slots: u64,
    #[arg(long, default_value_t = aoi_core::sim::DEFAULT_WARMUP)]
    pub warmup: u64,
    #[arg(long, default_value_t = aoi_core::sim::DEFAULT_SEED)]
    pub seed: u64,
    /// `block-on-full` or `accept-after-departure`.
    #[arg(long, default_value = "block-on-full", value_parser = tie_rule)]
    pub tie_rule: TieRule,
    /// Largest AoI value kept in the empirical pmf.
    #[arg(long, default_value_t = aoi_core::sim::DEFAULT_PMF_HORIZON as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub nmax: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = probability)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.02, value_parser = probability)]
    pub rho_min: f64,
    #[arg(long, default_value_t = 0.98, value_parser = probability)]
    pub rho_max: f64,
    #[arg(long, default_value_t = 49, value_parser = clap::value_parser!(u64).range(2..))]
    pub steps: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OptimalRhoArgs {
    #[arg(long, value_parser = probability)]
    pub gamma: f64,
    #[arg(long, default_value = "inf")]
    pub size: SizeArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long, default_value_t = 0.2, value_parser = probability)]
    pub p: f64,
    #[arg(long, default_value_t = 0.5, value_parser = probability)]
    pub gamma: f64,
    /// One simulation seed and a single chain solve.
    #[arg(long)]
    pub quick: bool,
}

/// Cross-flag checks clap cannot express. Returns the message for a usage error.
pub fn check(command: &Command) -> Result<(), String> {
    match command {
        Command::Pmf(a) | Command::Cdf(a) => a.size.closed_form().map(drop),
        Command::Mean(a) => {
            a.size.closed_form()?;
            if a.continuous && a.size == SizeArg::Infinite && a.rho.is_some_and(|r| r >= 1.0) {
                return Err("--rho must be below 1 for the unbounded continuous baseline".into());
            }
            if !a.continuous && (a.mu.is_some() || a.rho.is_some()) {
                return Err("--mu and --rho are only used with --continuous".into());
            }
            Ok(())
        }
        Command::OptimalRho(a) => a.size.closed_form().map(drop),
        Command::Sweep(a) => {
            if a.rho_min >= a.rho_max {
                return Err(format!("--rho-min {} must be below --rho-max {}", a.rho_min, a.rho_max));
            }
            Ok(())
        }
        Command::Simulate(a) => {
            if a.warmup >= a.slots {
                return Err(format!("--warmup {} must be below --slots {}", a.warmup, a.slots));
            }
            Ok(())
        }
        Command::Chain(_) | Command::Validate(_) => Ok(()),
    }
}
