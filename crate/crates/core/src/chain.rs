//! The two-dimensional age process `(n, m)` of the unbounded queue, built
//! transition by transition and solved by power iteration on a truncated
//! state space.
//!
//! Truncation clamps rather than rejects: any move to an AoI above the
//! horizon `N` lands on `N`, and the service age is capped at `n - 1`. The
//! clamped operator stays stochastic, so its bias is confined near `n = N`.

use crate::analytic::InfiniteQueue;
use crate::error::{AoiError, Result};
use crate::params::{AgeState, ModelParams};
use crate::pmf::Pmf;

/// Iteration cap for [`stationary_distribution`].
pub const MAX_ITERATIONS: usize = 1_000_000;

/// Slack added to the clamp mass when bounding the AoI marginal's tail.
pub const MARGINAL_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionEntry {
    pub target: AgeState,
    pub probability: f64,
}

fn state(n: u64, m: u64) -> AgeState {
    AgeState::new(n, m).expect("transition targets satisfy n > m")
}

/// One-step law out of `from` in the untruncated chain.
///
/// An empty system stays empty, admits a packet that stays in service, or
/// delivers it within the slot. A busy system either keeps serving, or
/// delivers its packet (AoI becomes `m + 1`) and moves on to the next queued
/// packet, whose age is set by the geometric interarrival time.
pub fn transition_distribution(from: AgeState, params: &ModelParams) -> Vec<TransitionEntry> {
    let (p, g) = (params.p(), params.gamma());
    let (n, m) = (from.n(), from.m());
    let entry = |target, probability| TransitionEntry { target, probability };
    if m == 0 {
        return vec![
            entry(state(n + 1, 0), 1.0 - p),
            entry(state(n + 1, 1), p * (1.0 - g)),
            entry(state(1, 0), p * g),
        ];
    }
    let mut out = Vec::with_capacity(m as usize + 2);
    out.push(entry(state(n + 1, m + 1), 1.0 - g));
    let mut gap_law = p;
    for k in 1..=m {
        out.push(entry(state(m + 1, m + 1 - k), g * gap_law));
        gap_law *= 1.0 - p;
    }
    // gap_law is now p (1-p)^m; the queue empties when the gap exceeds m
    out.push(entry(state(m + 1, 0), g * gap_law / p));
    out
}

/// The age chain restricted to AoI values `1..=horizon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedChain {
    params: ModelParams,
    horizon: u64,
}

impl TruncatedChain {
    pub fn new(params: ModelParams, horizon: u64) -> Result<Self> {
        if horizon < 2 {
            return Err(AoiError::InvalidConfig(format!("chain horizon {horizon} < 2")));
        }
        Ok(Self { params, horizon })
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn state_count(&self) -> usize {
        state_count(self.horizon)
    }

    /// Maps a target of the untruncated chain onto the truncated space.
    pub fn clamp(&self, target: AgeState) -> AgeState {
        let n = target.n().min(self.horizon);
        let m = target.m().min(n - 1);
        state(n, m)
    }

    /// Transitions out of `from` with clamped targets (duplicates not merged).
    pub fn transitions(&self, from: AgeState) -> Result<Vec<TransitionEntry>> {
        if from.n() > self.horizon {
            return Err(AoiError::InvalidState {
                n: from.n(),
                m: from.m(),
                rule: "n <= horizon",
            });
        }
        Ok(transition_distribution(from, &self.params)
            .into_iter()
            .map(|e| TransitionEntry {
                target: self.clamp(e.target),
                probability: e.probability,
            })
            .collect())
    }

    /// `y = x P` for the clamped chain, exploiting that the post-delivery law
    /// depends on the service age only.
    fn apply(&self, x: &[f64], y: &mut [f64], service_mass: &mut [f64], gap_law: &[f64]) {
        let (p, g) = (self.params.p(), self.params.gamma());
        let top = self.horizon;
        y.fill(0.0);
        service_mass.fill(0.0);
        for n in 1..=top {
            let next = (n + 1).min(top);
            let base = index(n, 0);
            let next_base = index(next, 0);
            let idle = x[base];
            y[next_base] += idle * (1.0 - p);
            y[next_base + 1] += idle * p * (1.0 - g);
            y[0] += idle * p * g;
            for m in 1..n {
                let mass = x[base + m as usize];
                let next_m = (m + 1).min(next - 1);
                y[next_base + next_m as usize] += mass * (1.0 - g);
                service_mass[m as usize] += mass;
            }
        }
        for m in 1..top {
            let delivered = service_mass[m as usize] * g;
            if delivered == 0.0 {
                continue;
            }
            let row = index(m + 1, 0);
            // next in-service age j = m + 1 - k for gap k = 1..=m
            for j in 1..=m {
                y[row + j as usize] += delivered * gap_law[(m - j) as usize];
            }
            y[row] += delivered * gap_law[m as usize] / p;
        }
    }
}

/// Number of states `(n, m)` with `1 <= n <= horizon`.
pub fn state_count(horizon: u64) -> usize {
    (horizon * (horizon + 1) / 2) as usize
}

/// Lexicographic position of `(n, m)`.
fn index(n: u64, m: u64) -> usize {
    ((n - 1) * n / 2 + m) as usize
}

/// Stationary law of the truncated chain plus convergence diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSolution {
    params: ModelParams,
    horizon: u64,
    probabilities: Vec<f64>,
    iterations: usize,
    l1_delta: f64,
    clamp_mass: f64,
}

impl ChainSolution {
    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn l1_delta(&self) -> f64 {
        self.l1_delta
    }

    /// Stationary mass on the clamped rows `n = N - 1` and `n = N`.
    pub fn clamp_mass(&self) -> f64 {
        self.clamp_mass
    }

    /// Probability of `(n, m)`; zero outside the truncated space.
    pub fn probability(&self, n: u64, m: u64) -> f64 {
        if n == 0 || n > self.horizon || m >= n {
            return 0.0;
        }
        self.probabilities[index(n, m)]
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// `(n, m, probability)` in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64, f64)> + '_ {
        (1..=self.horizon).flat_map(move |n| (0..n).map(move |m| (n, m, self.probabilities[index(n, m)])))
    }

    /// AoI marginal: probabilities summed over the service age.
    pub fn aoi_marginal(&self) -> Result<Pmf> {
        let masses: Vec<f64> = (1..=self.horizon)
            .map(|n| {
                let base = index(n, 0);
                self.probabilities[base..base + n as usize].iter().sum()
            })
            .collect();
        let tail = self.clamp_mass + MARGINAL_SLACK;
        Pmf::new(masses, tail, tail + 1e-12)
    }
}

/// Power iteration on the clamped chain from the uniform vector until the
/// per-iteration L1 change drops to `tol`.
pub fn stationary_distribution(params: ModelParams, horizon: u64, tol: f64) -> Result<ChainSolution> {
    stationary_distribution_capped(params, horizon, tol, MAX_ITERATIONS)
}

pub fn stationary_distribution_capped(
    params: ModelParams,
    horizon: u64,
    tol: f64,
    max_iterations: usize,
) -> Result<ChainSolution> {
    params.ensure_stable()?;
    if horizon < 10 {
        return Err(AoiError::InvalidConfig(format!("chain horizon {horizon} < 10")));
    }
    if !(tol > 0.0) {
        return Err(AoiError::OutOfRange {
            name: "tol",
            value: tol,
            expected: "(0, inf)",
        });
    }
    let chain = TruncatedChain::new(params, horizon)?;
    let count = chain.state_count();
    let p = params.p();
    let gap_law: Vec<f64> = (0..=horizon)
        .scan(p, |w, _| {
            let cur = *w;
            *w *= 1.0 - p;
            Some(cur)
        })
        .collect();

    let mut x = vec![1.0 / count as f64; count];
    let mut y = vec![0.0; count];
    let mut service_mass = vec![0.0; horizon as usize + 1];
    let mut l1_delta = f64::INFINITY;
    let mut iterations = 0;
    while iterations < max_iterations {
        chain.apply(&x, &mut y, &mut service_mass, &gap_law);
        let total: f64 = y.iter().sum();
        l1_delta = 0.0;
        for (new, old) in y.iter_mut().zip(&x) {
            *new /= total;
            l1_delta += (*new - old).abs();
        }
        std::mem::swap(&mut x, &mut y);
        iterations += 1;
        if l1_delta <= tol {
            break;
        }
    }
    if l1_delta > tol {
        return Err(AoiError::NoConvergence {
            iterations,
            l1_delta,
            tol,
        });
    }
    let clamp_mass = x[index(horizon - 1, 0)..].iter().sum();
    Ok(ChainSolution {
        params,
        horizon,
        probabilities: x,
        iterations,
        l1_delta,
        clamp_mass,
    })
}

/// A joint law over `(n, m)` that can be checked against the balance equations.
pub trait StationaryTable {
    fn params(&self) -> ModelParams;

    fn probability(&self, n: u64, m: u64) -> f64;

    /// `sum_{k > m} probability(k, m)`: mass with service age `m`.
    fn service_age_mass(&self, m: u64) -> f64;
}

impl StationaryTable for InfiniteQueue {
    fn params(&self) -> ModelParams {
        crate::model::AoiModel::params(self)
    }

    fn probability(&self, n: u64, m: u64) -> f64 {
        self.pi(n, m).unwrap_or(0.0)
    }

    fn service_age_mass(&self, m: u64) -> f64 {
        self.marginal_service_age(m)
    }
}

impl StationaryTable for ChainSolution {
    fn params(&self) -> ModelParams {
        self.params
    }

    fn probability(&self, n: u64, m: u64) -> f64 {
        ChainSolution::probability(self, n, m)
    }

    fn service_age_mass(&self, m: u64) -> f64 {
        (m + 1..=self.horizon).map(|k| self.probability(k, m)).sum()
    }
}

/// Largest absolute violation of the four families of balance equations
/// for every applicable state with `n <= n_max`.
pub fn residual_against(table: &dyn StationaryTable, n_max: u64) -> f64 {
    let params = table.params();
    let (p, g) = (params.p(), params.gamma());
    let pi = |n, m| table.probability(n, m);
    let mut worst: f64 = 0.0;

    // (1, 0) is reached only by an arrival served within one slot
    let idle_total = table.service_age_mass(0);
    worst = worst.max((pi(1, 0) - idle_total * p * g).abs());

    for n in 2..=n_max {
        let delivered = table.service_age_mass(n - 1);
        let empty = pi(n - 1, 0) * (1.0 - p) + delivered * g * (1.0 - p).powi(n as i32 - 1);
        worst = worst.max((pi(n, 0) - empty).abs());

        let fresh = pi(n - 1, 0) * p * (1.0 - g) + delivered * p * g * (1.0 - p).powi(n as i32 - 2);
        worst = worst.max((pi(n, 1) - fresh).abs());

        for m in 2..n {
            let busy = pi(n - 1, m - 1) * (1.0 - g) + delivered * p * g * (1.0 - p).powi((n - m - 1) as i32);
            worst = worst.max((pi(n, m) - busy).abs());
        }
    }
    worst
}
