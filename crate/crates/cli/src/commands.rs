//! Verb implementations.

use std::fmt;
use std::io;

use aoi_core::analytic::{aoi_mean_mm1, minimize_mean_over_rho, ContinuousParams, RhoOptimum};
use aoi_core::analytic::rho::mean_at_intensity;
use aoi_core::chain::stationary_distribution;
use aoi_core::sim::{self, SimConfig};
use aoi_core::validation::{self, ValidationPlan};
use aoi_core::{model_for, AoiError, ModelParams, SystemSize};
use rayon::prelude::*;

use crate::args::{
    ChainArgs, Command, DistArgs, Format, MeanArgs, OptimalRhoArgs, OutputArgs, ParamArgs, SimulateArgs, SweepArgs,
    ValidateArgs,
};
use crate::emit::{fixed, json_bytes, rounded, write_output, Cell, Table};

/// Power-iteration tolerance for `chain`.
pub const CHAIN_TOL: f64 = 1e-13;

#[derive(Debug)]
pub enum CliError {
    Io(io::Error),
    Model(AoiError),
    /// One or more validation checks failed.
    ValidationFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        1
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(e) => write!(f, "IoError: {e}"),
            // the message already starts with the error kind
            CliError::Model(e) => write!(f, "{e}"),
            CliError::ValidationFailed(n) => write!(f, "ValidationFailed: {n} check(s) failed"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<AoiError> for CliError {
    fn from(e: AoiError) -> Self {
        CliError::Model(e)
    }
}

pub fn execute(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Pmf(a) => distribution(a, false),
        Command::Cdf(a) => distribution(a, true),
        Command::Mean(a) => mean(a),
        Command::Chain(a) => chain(a),
        Command::Simulate(a) => simulate(a),
        Command::Sweep(a) => sweep(a),
        Command::OptimalRho(a) => optimal_rho(a),
        Command::Validate(a) => validate(a),
    }
}

fn params(a: &ParamArgs) -> Result<ModelParams, CliError> {
    Ok(ModelParams::new(a.p, a.gamma)?)
}

fn closed_size(size: crate::args::SizeArg) -> SystemSize {
    size.closed_form().expect("size checked at parse time")
}

fn emit_table(table: &Table, output: &OutputArgs) -> Result<(), CliError> {
    let bytes = table.render(output.format_or_csv(), output.precision)?;
    Ok(write_output(&bytes, output.out.as_deref())?)
}

/// Plain lines when no `--format` was given, a table otherwise.
fn emit_plain_or_table(lines: &[String], table: &Table, output: &OutputArgs) -> Result<(), CliError> {
    match output.format {
        None => {
            let mut text = lines.join("\n");
            text.push('\n');
            Ok(write_output(text.as_bytes(), output.out.as_deref())?)
        }
        Some(_) => emit_table(table, output),
    }
}

fn distribution(a: &DistArgs, cumulative: bool) -> Result<(), CliError> {
    let model = model_for(closed_size(a.size), params(&a.params)?)?;
    let mut table = Table::new(vec!["n", if cumulative { "cdf" } else { "pmf" }]);
    for n in 1..=a.nmax {
        let value = if cumulative { model.cdf(n) } else { model.pmf(n) };
        table.push(vec![n.into(), value.into()]);
    }
    emit_table(&table, &a.output)
}

fn mean(a: &MeanArgs) -> Result<(), CliError> {
    let size = closed_size(a.size);
    let discrete = model_for(size, params(&a.params)?)?.mean();
    let continuous = match (a.continuous, a.mu, a.rho) {
        (true, Some(mu), Some(rho)) => Some(aoi_mean_mm1(ContinuousParams::new(mu, rho)?, size)?),
        _ => None,
    };
    let precision = a.output.precision;
    let mut lines = vec![fixed(discrete, precision)];
    let mut columns = vec!["size", "p", "gamma", "mean"];
    let mut row: Vec<Cell> = vec![size.key().into(), a.params.p.into(), a.params.gamma.into(), discrete.into()];
    if let Some(value) = continuous {
        lines.push(fixed(value, precision));
        columns.extend(["mu", "rho", "continuous_mean"]);
        row.extend([a.mu.into(), a.rho.into(), value.into()]);
    }
    let mut table = Table::new(columns);
    table.push(row);
    emit_plain_or_table(&lines, &table, &a.output)
}

fn chain(a: &ChainArgs) -> Result<(), CliError> {
    let solution = stationary_distribution(params(&a.params)?, a.nmax, CHAIN_TOL)?;
    eprintln!(
        "chain: horizon {}, {} iterations, final L1 change {:.3e}, boundary mass {:.3e}",
        solution.horizon(),
        solution.iterations(),
        solution.l1_delta(),
        solution.clamp_mass()
    );
    let table = if a.full {
        let mut table = Table::new(vec!["n", "m", "probability"]);
        for (n, m, p) in solution.iter() {
            table.push(vec![n.into(), m.into(), p.into()]);
        }
        table
    } else {
        let marginal = solution.aoi_marginal()?;
        let mut table = Table::new(vec!["n", "probability"]);
        for (i, &mass) in marginal.masses().iter().enumerate() {
            table.push(vec![(i as u64 + 1).into(), mass.into()]);
        }
        table
    };
    emit_table(&table, &a.output)
}

fn simulate(a: &SimulateArgs) -> Result<(), CliError> {
    let config = SimConfig::new(params(&a.params)?, a.capacity.capacity())
        .with_slots(a.slots, a.warmup)
        .with_seed(a.seed)
        .with_tie_rule(a.tie_rule)
        .with_pmf_horizon(a.nmax as usize);
    let result = sim::run(&config)?;
    let mut report = result.report();
    let precision = a.output.precision;
    eprintln!(
        "simulate: mean {} over {} slots, {} deliveries, {} drops, max AoI {}",
        fixed(report.mean, precision),
        result.recorded_slots(),
        report.deliveries,
        report.drops,
        report.max_aoi
    );
    match a.output.format_or_json() {
        Format::Json => {
            report.mean = rounded(report.mean, precision);
            for (_, mass) in &mut report.pmf {
                *mass = rounded(*mass, precision);
            }
            let value = serde_json::to_value(&report).map_err(io::Error::from)?;
            Ok(write_output(&json_bytes(&value)?, a.output.out.as_deref())?)
        }
        Format::Csv => {
            let mut table = Table::new(vec!["n", "mass"]);
            for &(n, mass) in &report.pmf {
                table.push(vec![n.into(), mass.into()]);
            }
            emit_table(&table, &a.output)
        }
    }
}

fn sweep(a: &SweepArgs) -> Result<(), CliError> {
    let steps = a.steps as usize;
    let rhos: Vec<f64> = (0..steps)
        .map(|i| a.rho_min + (a.rho_max - a.rho_min) * i as f64 / (steps - 1) as f64)
        .collect();
    let gamma = a.gamma;
    // collect keeps input order
    let rows: Vec<Vec<Cell>> = rhos
        .par_iter()
        .map(|&rho| -> Result<Vec<Cell>, AoiError> {
            let cp = ContinuousParams::new(gamma, rho)?;
            Ok(vec![
                rho.into(),
                (gamma * mean_at_intensity(gamma, rho, SystemSize::One)?).into(),
                (gamma * mean_at_intensity(gamma, rho, SystemSize::Infinite)?).into(),
                (gamma * aoi_mean_mm1(cp, SystemSize::One)?).into(),
                (gamma * aoi_mean_mm1(cp, SystemSize::Infinite)?).into(),
            ])
        })
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(vec!["rho", "discrete_1", "discrete_inf", "continuous_1", "continuous_inf"]);
    for row in rows {
        table.push(row);
    }
    emit_table(&table, &a.output)
}

fn optimal_rho(a: &OptimalRhoArgs) -> Result<(), CliError> {
    let size = closed_size(a.size);
    let optimum = minimize_mean_over_rho(a.gamma, size)?;
    let (line, rho, mean) = match optimum {
        RhoOptimum::Interior { rho, mean } => (fixed(rho, a.output.precision), Some(rho), Some(mean)),
        RhoOptimum::Decreasing => ("decreasing".to_string(), None, None),
    };
    let mut table = Table::new(vec!["gamma", "size", "rho_star", "mean"]);
    table.push(vec![a.gamma.into(), size.key().into(), rho.into(), mean.into()]);
    emit_plain_or_table(&[line], &table, &a.output)
}

fn validate(a: &ValidateArgs) -> Result<(), CliError> {
    let plan = if a.quick {
        ValidationPlan::quick()
    } else {
        ValidationPlan::standard()
    }
    .with_point(a.p, a.gamma);
    let outcomes = validation::run_all(&plan);
    let mut text = String::new();
    for outcome in &outcomes {
        // timings go to stderr so stdout stays reproducible
        text.push_str(&format!(
            "[{}] {}. {}: {}\n",
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.id,
            outcome.name,
            outcome.detail
        ));
        eprintln!(
            "check {}: {:.3} s (budget {} s)",
            outcome.id,
            outcome.elapsed.as_secs_f64(),
            outcome.budget.as_secs()
        );
    }
    write_output(text.as_bytes(), None)?;
    match outcomes.iter().filter(|o| !o.passed).count() {
        0 => Ok(()),
        failed => Err(CliError::ValidationFailed(failed)),
    }
}
