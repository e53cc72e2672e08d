//! Slot-level simulation of the Bernoulli-arrival, geometric-service FCFS
//! status-update queue with finite or unbounded capacity.
//!
//! Each slot runs in a fixed order: an arrival (if any) is offered at the
//! start of the slot, the head-of-line packet may depart at the end, then
//! every age advances by one and a departure resets the AoI to the age of
//! the delivered packet. The AoI recorded for a slot is the value after all
//! three steps.
//!
//! Randomness comes from `rand_chacha::ChaCha8Rng` seeded with
//! `seed_from_u64(seed)`; each slot draws the arrival bit, then the service
//! bit, with `Rng::random_bool`.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{AoiError, Result};
use crate::model::SystemSize;
use crate::params::ModelParams;
use crate::pmf::Pmf;
use crate::registry::model_for;

pub const DEFAULT_SLOTS: u64 = 1_000_000;
pub const DEFAULT_WARMUP: u64 = 10_000;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_PMF_HORIZON: usize = 100;

/// Total number of packets the system holds, the one in service included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Capacity {
    Finite(u64),
    Unbounded,
}

impl Capacity {
    pub fn finite(c: u64) -> Result<Self> {
        if c == 0 {
            return Err(AoiError::InvalidConfig("capacity must be at least 1".into()));
        }
        Ok(Capacity::Finite(c))
    }

    fn admits(self, occupancy: usize) -> bool {
        match self {
            Capacity::Finite(c) => (occupancy as u64) < c,
            Capacity::Unbounded => true,
        }
    }

    /// The closed-form model matching this capacity, if there is one.
    pub fn system_size(self) -> Option<SystemSize> {
        match self {
            Capacity::Finite(1) => Some(SystemSize::One),
            Capacity::Unbounded => Some(SystemSize::Infinite),
            Capacity::Finite(_) => None,
        }
    }
}

impl From<SystemSize> for Capacity {
    fn from(size: SystemSize) -> Self {
        match size {
            SystemSize::One => Capacity::Finite(1),
            SystemSize::Infinite => Capacity::Unbounded,
        }
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(c) => write!(f, "{c}"),
            Capacity::Unbounded => f.write_str("inf"),
        }
    }
}

impl FromStr for Capacity {
    type Err = AoiError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "infinite" | "∞" => Ok(Capacity::Unbounded),
            other => other
                .parse::<u64>()
                .map_err(|_| AoiError::InvalidConfig(format!("capacity {other:?} is not a positive integer or inf")))
                .and_then(Capacity::finite),
        }
    }
}

impl Serialize for Capacity {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Capacity::Finite(c) => serializer.serialize_u64(*c),
            Capacity::Unbounded => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Capacity {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(u64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Number(c) => Capacity::finite(c).map_err(serde::de::Error::custom),
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// What happens to an arrival that finds a finite system full in a slot
/// where the head-of-line packet departs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieRule {
    /// Dropped: occupancy is judged at the arrival instant. Matches the
    /// closed-form bufferless model.
    #[default]
    BlockOnFull,
    /// Admitted after the departure, entering service from the next slot.
    AcceptAfterDeparture,
}

impl TieRule {
    pub fn key(self) -> &'static str {
        match self {
            TieRule::BlockOnFull => "block-on-full",
            TieRule::AcceptAfterDeparture => "accept-after-departure",
        }
    }
}

impl fmt::Display for TieRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for TieRule {
    type Err = AoiError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "block-on-full" | "block" => Ok(TieRule::BlockOnFull),
            "accept-after-departure" | "accept" => Ok(TieRule::AcceptAfterDeparture),
            other => Err(AoiError::InvalidConfig(format!("unknown tie rule {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub params: ModelParams,
    pub capacity: Capacity,
    pub total_slots: u64,
    pub warmup_slots: u64,
    pub seed: u64,
    pub tie_rule: TieRule,
    pub pmf_horizon: usize,
}

impl SimConfig {
    pub fn new(params: ModelParams, capacity: Capacity) -> Self {
        Self {
            params,
            capacity,
            total_slots: DEFAULT_SLOTS,
            warmup_slots: DEFAULT_WARMUP,
            seed: DEFAULT_SEED,
            tie_rule: TieRule::default(),
            pmf_horizon: DEFAULT_PMF_HORIZON,
        }
    }

    pub fn with_slots(mut self, total_slots: u64, warmup_slots: u64) -> Self {
        self.total_slots = total_slots;
        self.warmup_slots = warmup_slots;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tie_rule(mut self, tie_rule: TieRule) -> Self {
        self.tie_rule = tie_rule;
        self
    }

    pub fn with_pmf_horizon(mut self, pmf_horizon: usize) -> Self {
        self.pmf_horizon = pmf_horizon;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.total_slots == 0 {
            return Err(AoiError::InvalidConfig("total slots must be positive".into()));
        }
        if self.warmup_slots >= self.total_slots {
            return Err(AoiError::InvalidConfig(format!(
                "warmup {} must be below total slots {}",
                self.warmup_slots, self.total_slots
            )));
        }
        if self.pmf_horizon == 0 {
            return Err(AoiError::InvalidConfig("pmf horizon must be at least 1".into()));
        }
        if let Capacity::Finite(0) = self.capacity {
            return Err(AoiError::InvalidConfig("capacity must be at least 1".into()));
        }
        if self.capacity == Capacity::Unbounded {
            self.params.ensure_stable()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Delivery {
    /// Slot in which the packet arrived.
    pub generated_at: u64,
    /// Age after the delivery slot, i.e. the new AoI.
    pub age: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotEvents {
    pub slot: u64,
    pub arrived: bool,
    pub admitted: bool,
    pub dropped: bool,
    pub delivered: Option<Delivery>,
    pub aoi_before: u64,
    pub aoi_after: u64,
}

/// Receiver AoI plus the FIFO of queued packets, stored by arrival slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimState {
    slot: u64,
    aoi: u64,
    queue: VecDeque<u64>,
}

impl Default for SimState {
    fn default() -> Self {
        Self::new()
    }
}

impl SimState {
    /// Empty system at slot 1 with AoI 1.
    pub fn new() -> Self {
        Self {
            slot: 1,
            aoi: 1,
            queue: VecDeque::new(),
        }
    }

    /// Index of the next slot to run.
    pub fn slot(&self) -> u64 {
        self.slot
    }

    pub fn aoi(&self) -> u64 {
        self.aoi
    }

    pub fn occupancy(&self) -> usize {
        self.queue.len()
    }

    /// Ages of queued packets at the start of the next slot, head first.
    pub fn packet_ages(&self) -> impl Iterator<Item = u64> + '_ {
        self.queue.iter().map(move |g| self.slot - g)
    }

    /// Arrival slots of queued packets, head first.
    pub fn arrival_slots(&self) -> impl Iterator<Item = u64> + '_ {
        self.queue.iter().copied()
    }

    /// Runs one slot with the given arrival and service outcomes.
    pub fn step(&mut self, arrival: bool, service: bool, capacity: Capacity, tie_rule: TieRule) -> SlotEvents {
        let slot = self.slot;
        let mut admitted = false;
        let mut deferred = false;
        if arrival {
            if capacity.admits(self.queue.len()) {
                self.queue.push_back(slot);
                admitted = true;
            } else if tie_rule == TieRule::AcceptAfterDeparture {
                deferred = true;
            }
        }

        let departed = if service { self.queue.pop_front() } else { None };

        if deferred && departed.is_some() {
            self.queue.push_back(slot);
            admitted = true;
        }

        let aoi_before = self.aoi;
        self.slot += 1;
        let delivered = departed.map(|generated_at| Delivery {
            generated_at,
            age: self.slot - generated_at,
        });
        self.aoi = match delivered {
            Some(d) => d.age,
            None => aoi_before + 1,
        };
        SlotEvents {
            slot,
            arrived: arrival,
            admitted,
            dropped: arrival && !admitted,
            delivered,
            aoi_before,
            aoi_after: self.aoi,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub config: SimConfig,
    pub empirical_pmf: Pmf,
    pub empirical_mean: f64,
    pub delivered_count: u64,
    pub arrival_count: u64,
    pub dropped_count: u64,
    /// Packets still queued after the last slot.
    pub final_occupancy: u64,
    /// Largest AoI over the recorded (post-warmup) slots.
    pub max_aoi: u64,
}

impl SimResult {
    pub fn seed(&self) -> u64 {
        self.config.seed
    }

    pub fn recorded_slots(&self) -> u64 {
        self.config.total_slots - self.config.warmup_slots
    }

    /// Flat serializable view with the public JSON field names.
    pub fn report(&self) -> SimReport {
        SimReport {
            p: self.config.params.p(),
            gamma: self.config.params.gamma(),
            capacity: self.config.capacity,
            slots: self.config.total_slots,
            warmup: self.config.warmup_slots,
            seed: self.config.seed,
            tie_rule: self.config.tie_rule,
            mean: self.empirical_mean,
            max_aoi: self.max_aoi,
            arrivals: self.arrival_count,
            deliveries: self.delivered_count,
            drops: self.dropped_count,
            pmf: self
                .empirical_pmf
                .masses()
                .iter()
                .enumerate()
                .map(|(i, &mass)| (i as u64 + 1, mass))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub p: f64,
    pub gamma: f64,
    pub capacity: Capacity,
    pub slots: u64,
    pub warmup: u64,
    pub seed: u64,
    pub tie_rule: TieRule,
    pub mean: f64,
    pub max_aoi: u64,
    pub arrivals: u64,
    pub deliveries: u64,
    pub drops: u64,
    pub pmf: Vec<(u64, f64)>,
}

pub fn run(config: &SimConfig) -> Result<SimResult> {
    run_observed(config, |_, _| {})
}

/// Runs the simulation, handing every slot's events and the resulting state
/// to `observer`.
pub fn run_observed(config: &SimConfig, mut observer: impl FnMut(&SlotEvents, &SimState)) -> Result<SimResult> {
    config.validate()?;
    let (p, g) = (config.params.p(), config.params.gamma());
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut state = SimState::new();
    let mut histogram = vec![0u64; config.pmf_horizon];
    let mut overflow = 0u64;
    let mut aoi_sum: u128 = 0;
    let mut max_aoi = 0;
    let (mut arrivals, mut deliveries, mut drops) = (0u64, 0u64, 0u64);

    for k in 1..=config.total_slots {
        let arrival = rng.random_bool(p);
        let service = rng.random_bool(g);
        let events = state.step(arrival, service, config.capacity, config.tie_rule);
        arrivals += u64::from(events.arrived);
        drops += u64::from(events.dropped);
        deliveries += u64::from(events.delivered.is_some());
        if k > config.warmup_slots {
            let a = events.aoi_after;
            aoi_sum += u128::from(a);
            max_aoi = max_aoi.max(a);
            match histogram.get_mut(a as usize - 1) {
                Some(count) => *count += 1,
                None => overflow += 1,
            }
        }
        observer(&events, &state);
    }

    let recorded = (config.total_slots - config.warmup_slots) as f64;
    let masses = histogram.iter().map(|&c| c as f64 / recorded).collect();
    let empirical_pmf = Pmf::new(masses, overflow as f64 / recorded, 1e-9)?;
    Ok(SimResult {
        config: *config,
        empirical_pmf,
        empirical_mean: aoi_sum as f64 / recorded,
        delivered_count: deliveries,
        arrival_count: arrivals,
        dropped_count: drops,
        final_occupancy: state.occupancy() as u64,
        max_aoi,
    })
}

/// Outcome of checking `a(k+1) = a(k) + 1 - Y_j` at every delivery, where
/// `Y_j` is the gap between the arrival slots of consecutive deliveries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RecursionAudit {
    pub deliveries_checked: u64,
    pub violations: u64,
}

pub fn run_audited(config: &SimConfig) -> Result<(SimResult, RecursionAudit)> {
    let mut audit = RecursionAudit::default();
    // the initial AoI of 1 at slot 1 stands for a delivery generated at slot 0
    let mut last_generated: i128 = 0;
    let result = run_observed(config, |events, _| {
        if let Some(d) = events.delivered {
            let gap = d.generated_at as i128 - last_generated;
            let expected = events.aoi_before as i128 + 1 - gap;
            audit.deliveries_checked += 1;
            if events.aoi_after as i128 != expected {
                audit.violations += 1;
            }
            last_generated = d.generated_at as i128;
        }
    })?;
    Ok((result, audit))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub tv_distance: f64,
    pub mean_gap: f64,
}

/// Compares an empirical AoI law with the closed form for `size`.
pub fn empirical_vs_analytic(result: &SimResult, size: SystemSize) -> Result<Comparison> {
    let matching = result
        .config
        .capacity
        .system_size()
        .ok_or_else(|| AoiError::SizeUnsupported(format!("capacity {}", result.config.capacity)))?;
    if matching != size {
        return Err(AoiError::InvalidConfig(format!(
            "simulated capacity {} does not match system size {size}",
            result.config.capacity
        )));
    }
    let model = model_for(size, result.config.params)?;
    let analytic = model.truncated_pmf(result.empirical_pmf.horizon() as u64)?;
    Ok(Comparison {
        tv_distance: result.empirical_pmf.tv_distance(&analytic),
        mean_gap: (result.empirical_mean - model.mean()).abs(),
    })
}
