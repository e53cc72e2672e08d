//! Cross-checks between the closed forms, the chain oracle and the simulator.
//!
//! Every check carries its tolerance and runtime budget as constants in
//! [`tolerances`]; a check passes only if both hold.

use std::time::{Duration, Instant};

use crate::analytic::rho::{intensity_grid, mean_at_intensity};
use crate::analytic::{continuous_limit_gap, minimize_mean_over_rho, InfiniteQueue, RhoOptimum};
use crate::chain::{residual_against, stationary_distribution};
use crate::error::Result;
use crate::model::SystemSize;
use crate::params::ModelParams;
use crate::registry::model_for;
use crate::sim::{empirical_vs_analytic, run, run_audited, Capacity, SimConfig};

pub mod tolerances {
    use std::time::Duration;

    /// Relative agreement of the expanded and intensity forms of the mean.
    pub const MEAN_FORMS_REL: f64 = 1e-10;
    /// Both mean forms at `(0.2, 0.5)` against `94 / 15`.
    pub const MEAN_REFERENCE_ABS: f64 = 1e-12;
    /// Tail tolerance passed to the truncation horizon.
    pub const TRUNCATION_EPS: f64 = 1e-10;
    /// Mean of the truncated pmf against the closed-form mean.
    pub const PMF_MEAN_ABS: f64 = 1e-8;
    pub const CHAIN_HORIZON: u64 = 300;
    pub const CHAIN_TOL: f64 = 1e-13;
    /// Largest AoI compared between the chain and the closed form.
    pub const CHAIN_COMPARE_MAX_N: u64 = 250;
    pub const CHAIN_ABS: f64 = 1e-8;
    pub const BALANCE_MAX_N: u64 = 100;
    pub const BALANCE_ABS: f64 = 1e-12;
    pub const SIM_SLOTS: u64 = 10_000_000;
    pub const SIM_WARMUP: u64 = 10_000;
    pub const SIM_SEEDS: [u64; 3] = [1, 2, 3];
    pub const SIM_MEAN_REL: f64 = 0.01;
    pub const SIM_TV: f64 = 0.01;
    pub const SIM_PMF_HORIZON: usize = 100;
    pub const CURVE_GAMMA: f64 = 0.5;
    pub const CURVE_POINTS: usize = 256;
    pub const CURVE_RHO_RANGE: (f64, f64) = (0.02, 0.98);
    pub const SMALL_GAMMA: f64 = 1e-3;
    pub const SMALL_GAMMA_RHO_STAR: f64 = 0.531;
    pub const SMALL_GAMMA_RHO_TOL: f64 = 0.005;
    pub const LIMIT_RHOS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
    pub const LIMIT_GAMMA_SMALL: f64 = 1e-4;
    pub const LIMIT_GAMMA_LARGE: f64 = 1e-2;
    pub const LIMIT_GAP_ABS: f64 = 1e-3;
    pub const AUDIT_SLOTS: u64 = 100_000;

    pub const BUDGET_FORMS: Duration = Duration::from_secs(1);
    pub const BUDGET_PMF_MEAN: Duration = Duration::from_secs(1);
    pub const BUDGET_CHAIN: Duration = Duration::from_secs(60);
    pub const BUDGET_BALANCE: Duration = Duration::from_secs(5);
    pub const BUDGET_SIM: Duration = Duration::from_secs(60);
    pub const BUDGET_CURVES: Duration = Duration::from_secs(5);
    pub const BUDGET_LIMIT: Duration = Duration::from_secs(1);
    pub const BUDGET_AUDIT: Duration = Duration::from_secs(1);
}

use tolerances::*;

/// Stable parameter points exercised by the pmf, chain and balance checks.
pub const REFERENCE_POINTS: [(f64, f64); 3] = [(0.2, 0.5), (0.1, 0.9), (0.45, 0.5)];

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl CheckOutcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] {}. {}: {} ({:.3} s, budget {} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs()
        )
    }
}

/// Which parameter points and how many repetitions the checks use.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationPlan {
    /// Points for the pmf-mean, chain and balance checks.
    pub points: Vec<(f64, f64)>,
    /// Point for the simulation check.
    pub sim_point: (f64, f64),
    pub seeds: Vec<u64>,
}

impl Default for ValidationPlan {
    fn default() -> Self {
        Self::standard()
    }
}

impl ValidationPlan {
    /// The three reference points and three seeds.
    pub fn standard() -> Self {
        Self {
            points: REFERENCE_POINTS.to_vec(),
            sim_point: (0.2, 0.5),
            seeds: SIM_SEEDS.to_vec(),
        }
    }

    /// Same checks and tolerances, with the chain solved at the first point
    /// only and one simulation seed.
    pub fn quick() -> Self {
        Self {
            points: vec![REFERENCE_POINTS[0]],
            sim_point: (0.2, 0.5),
            seeds: vec![SIM_SEEDS[0]],
        }
    }

    /// Adds a user point to the point list and uses it for the simulation.
    pub fn with_point(mut self, p: f64, gamma: f64) -> Self {
        if !self.points.contains(&(p, gamma)) {
            self.points.push((p, gamma));
        }
        self.sim_point = (p, gamma);
        self
    }

    fn stable_points(&self) -> Vec<ModelParams> {
        self.points
            .iter()
            .filter_map(|&(p, g)| ModelParams::new(p, g).ok())
            .filter(|params| InfiniteQueue::new(*params).is_ok())
            .collect()
    }
}

fn timed(
    id: u8,
    name: &'static str,
    budget: Duration,
    check: impl FnOnce() -> Result<(bool, String)>,
) -> CheckOutcome {
    let start = Instant::now();
    let (ok, detail) = match check() {
        Ok(outcome) => outcome,
        Err(e) => (false, format!("{} error: {e}", e.kind())),
    };
    let elapsed = start.elapsed();
    let within = elapsed <= budget;
    let detail = if within {
        detail
    } else {
        format!("{detail}; over runtime budget")
    };
    CheckOutcome {
        id,
        name,
        passed: ok && within,
        detail,
        elapsed,
        budget,
    }
}

/// 100 stable points: ten service probabilities, ten arrival probabilities below each.
pub fn mean_form_grid() -> Vec<(f64, f64)> {
    let gammas = (0..10).map(|j| 0.15 + 0.8 * j as f64 / 9.0);
    gammas
        .flat_map(|g| (0..10).map(move |i| (0.05 + (g - 0.05) * i as f64 / 10.0, g)))
        .collect()
}

pub fn check_mean_forms() -> CheckOutcome {
    timed(1, "expanded and intensity mean forms agree", BUDGET_FORMS, || {
        let mut worst: f64 = 0.0;
        for (p, g) in mean_form_grid() {
            let q = InfiniteQueue::new(ModelParams::new(p, g)?)?;
            let (a, b) = (q.mean_expanded(), q.mean_intensity_form());
            worst = worst.max((a - b).abs() / b.abs());
        }
        let q = InfiniteQueue::new(ModelParams::new(0.2, 0.5)?)?;
        let reference = 94.0 / 15.0;
        let off = (q.mean_expanded() - reference)
            .abs()
            .max((q.mean_intensity_form() - reference).abs());
        Ok((
            worst <= MEAN_FORMS_REL && off <= MEAN_REFERENCE_ABS,
            format!("max rel diff {worst:.2e} over 100 points (tol {MEAN_FORMS_REL:e}); |mean(0.2,0.5) - 6.2667| = {off:.2e}"),
        ))
    })
}

pub fn check_pmf_mean(plan: &ValidationPlan) -> CheckOutcome {
    timed(2, "truncated pmf mean matches closed-form mean", BUDGET_PMF_MEAN, || {
        let mut worst: f64 = 0.0;
        let mut evaluated = 0;
        for &(p, g) in &plan.points {
            let params = ModelParams::new(p, g)?;
            for size in SystemSize::ALL {
                // the unbounded model is skipped at unstable user points
                let Ok(model) = model_for(size, params) else {
                    if size == SystemSize::One {
                        model_for(size, params)?;
                    }
                    continue;
                };
                let horizon = model.truncation_horizon(TRUNCATION_EPS)?;
                let truncated = model.truncated_pmf(horizon)?;
                worst = worst.max((truncated.mean() - model.mean()).abs());
                evaluated += 1;
            }
        }
        Ok((
            worst <= PMF_MEAN_ABS,
            format!("max |gap| {worst:.2e} over {evaluated} (point, size) pairs (tol {PMF_MEAN_ABS:e})"),
        ))
    })
}

pub fn check_chain_oracle(plan: &ValidationPlan) -> CheckOutcome {
    timed(3, "chain stationary solve matches closed-form state law", BUDGET_CHAIN, || {
        let points = plan.stable_points();
        let solved = std::thread::scope(|scope| {
            let handles: Vec<_> = points
                .iter()
                .map(|&params| scope.spawn(move || stationary_distribution(params, CHAIN_HORIZON, CHAIN_TOL)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("chain solve panicked"))
                .collect::<Vec<_>>()
        });
        let mut worst: f64 = 0.0;
        let mut iterations = Vec::new();
        for (params, solution) in points.iter().zip(solved) {
            let solution = solution?;
            let exact = InfiniteQueue::new(*params)?;
            iterations.push(solution.iterations());
            for n in 1..=CHAIN_COMPARE_MAX_N {
                for m in 0..n {
                    worst = worst.max((solution.probability(n, m) - exact.pi(n, m)?).abs());
                }
            }
        }
        Ok((
            worst <= CHAIN_ABS && !points.is_empty(),
            format!(
                "max |chain - closed form| {worst:.2e} for n <= {CHAIN_COMPARE_MAX_N} at {} points, iterations {iterations:?} (tol {CHAIN_ABS:e})",
                points.len()
            ),
        ))
    })
}

pub fn check_balance(plan: &ValidationPlan) -> CheckOutcome {
    timed(4, "closed-form state law satisfies balance equations", BUDGET_BALANCE, || {
        let points = plan.stable_points();
        let mut worst: f64 = 0.0;
        for params in &points {
            worst = worst.max(residual_against(&InfiniteQueue::new(*params)?, BALANCE_MAX_N));
        }
        Ok((
            worst <= BALANCE_ABS && !points.is_empty(),
            format!("max residual {worst:.2e} for n <= {BALANCE_MAX_N} at {} points (tol {BALANCE_ABS:e})", points.len()),
        ))
    })
}

pub fn check_simulation(plan: &ValidationPlan) -> CheckOutcome {
    timed(5, "simulated AoI matches closed forms", BUDGET_SIM, || {
        let (p, g) = plan.sim_point;
        let params = ModelParams::new(p, g)?;
        let mut configs = Vec::new();
        for size in SystemSize::ALL {
            if model_for(size, params).is_err() {
                continue;
            }
            for &seed in &plan.seeds {
                let cfg = SimConfig::new(params, Capacity::from(size))
                    .with_slots(SIM_SLOTS, SIM_WARMUP)
                    .with_seed(seed)
                    .with_pmf_horizon(SIM_PMF_HORIZON);
                configs.push((size, cfg));
            }
        }
        let results = std::thread::scope(|scope| {
            let handles: Vec<_> = configs
                .iter()
                .map(|(_, cfg)| scope.spawn(move || run(cfg)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("simulation panicked"))
                .collect::<Vec<_>>()
        });
        let mut ok = !configs.is_empty();
        let mut parts = Vec::new();
        for ((size, cfg), result) in configs.iter().zip(results) {
            let result = result?;
            let cmp = empirical_vs_analytic(&result, *size)?;
            let analytic = model_for(*size, params)?.mean();
            let rel = cmp.mean_gap / analytic;
            ok &= rel <= SIM_MEAN_REL && cmp.tv_distance <= SIM_TV;
            parts.push(format!(
                "c={} seed={}: mean {:.4} vs {:.4} (rel {:.2e}), tv {:.2e}",
                cfg.capacity, cfg.seed, result.empirical_mean, analytic, rel, cmp.tv_distance
            ));
        }
        Ok((
            ok,
            format!("{} (tol rel {SIM_MEAN_REL}, tv {SIM_TV})", parts.join("; ")),
        ))
    })
}

/// Interior grid on `(lo, hi)` excluding both ends.
fn open_grid(points: usize, (lo, hi): (f64, f64)) -> Vec<f64> {
    (1..=points)
        .map(|i| lo + (hi - lo) * i as f64 / (points + 1) as f64)
        .collect()
}

pub fn check_mean_curves() -> CheckOutcome {
    timed(6, "mean-vs-intensity curve shapes", BUDGET_CURVES, || {
        let g = CURVE_GAMMA;
        let scaled = open_grid(CURVE_POINTS, CURVE_RHO_RANGE)
            .into_iter()
            .map(|rho| Ok(g * mean_at_intensity(g, rho, SystemSize::One)?))
            .collect::<Result<Vec<_>>>()?;
        let decreasing = scaled.windows(2).all(|w| w[1] < w[0]);

        let interior = match minimize_mean_over_rho(g, SystemSize::Infinite)? {
            RhoOptimum::Interior { rho, .. } => {
                let grid = intensity_grid(3, crate::analytic::rho::RHO_MARGIN);
                let (lo, hi) = (grid[0], grid[2]);
                let left = mean_at_intensity(g, lo, SystemSize::Infinite)?;
                let right = mean_at_intensity(g, hi, SystemSize::Infinite)?;
                let at = mean_at_intensity(g, rho, SystemSize::Infinite)?;
                (rho > lo && rho < hi && at < left && at < right).then_some(rho)
            }
            RhoOptimum::Decreasing => None,
        };
        let small = minimize_mean_over_rho(SMALL_GAMMA, SystemSize::Infinite)?.rho();
        let small_ok = small.is_some_and(|r| (r - SMALL_GAMMA_RHO_STAR).abs() <= SMALL_GAMMA_RHO_TOL);
        Ok((
            decreasing && interior.is_some() && small_ok,
            format!(
                "(a) size-1 strictly decreasing: {decreasing}; (b) unbounded minimizer at gamma=0.5: {interior:?}; (c) rho* at gamma=1e-3: {small:?} (target {SMALL_GAMMA_RHO_STAR} +/- {SMALL_GAMMA_RHO_TOL})"
            ),
        ))
    })
}

pub fn check_continuous_limit() -> CheckOutcome {
    timed(7, "discrete mean approaches continuous baseline", BUDGET_LIMIT, || {
        let mut ok = true;
        let mut worst: f64 = 0.0;
        for size in SystemSize::ALL {
            for rho in LIMIT_RHOS {
                let small = continuous_limit_gap(rho, LIMIT_GAMMA_SMALL, size)?;
                let large = continuous_limit_gap(rho, LIMIT_GAMMA_LARGE, size)?;
                ok &= small <= LIMIT_GAP_ABS && small < large;
                worst = worst.max(small);
            }
        }
        Ok((
            ok,
            format!("max gap at gamma=1e-4: {worst:.2e} (tol {LIMIT_GAP_ABS:e}), all below gamma=1e-2 gaps: {ok}"),
        ))
    })
}

pub fn check_recursion(plan: &ValidationPlan) -> CheckOutcome {
    timed(8, "simulator follows the AoI recursion at every delivery", BUDGET_AUDIT, || {
        let (p, g) = plan.sim_point;
        let params = ModelParams::new(p, g)?;
        let mut capacities = vec![Capacity::Finite(1), Capacity::Finite(3)];
        if params.ensure_stable().is_ok() {
            capacities.push(Capacity::Unbounded);
        }
        let mut checked = 0;
        let mut violations = 0;
        for capacity in capacities {
            let cfg = SimConfig::new(params, capacity).with_slots(AUDIT_SLOTS, 0);
            let (_, audit) = run_audited(&cfg)?;
            checked += audit.deliveries_checked;
            violations += audit.violations;
        }
        Ok((
            violations == 0 && checked > 0,
            format!("{checked} deliveries checked, {violations} violations"),
        ))
    })
}

pub fn run_all(plan: &ValidationPlan) -> Vec<CheckOutcome> {
    vec![
        check_mean_forms(),
        check_pmf_mean(plan),
        check_chain_oracle(plan),
        check_balance(plan),
        check_simulation(plan),
        check_mean_curves(),
        check_continuous_limit(),
        check_recursion(plan),
    ]
}
