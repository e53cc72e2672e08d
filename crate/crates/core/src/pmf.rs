//! Truncated probability mass functions on the positive integers.

use crate::error::{AoiError, Result};

/// Masses below this value are treated as underflow: flushed to zero and
/// moved into the tail bound.
pub const UNDERFLOW_FLUSH: f64 = 1e-300;

/// Default normalization tolerance for [`Pmf::new`].
pub const DEFAULT_PMF_EPS: f64 = 1e-9;

/// A pmf supported on `{1, 2, ...}`, stored up to a finite horizon together
/// with an upper bound on the omitted mass.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    masses: Vec<f64>,
    tail_bound: f64,
    eps: f64,
}

impl Pmf {
    /// Builds a pmf whose first mass is at `n = 1`.
    ///
    /// Fails if a mass or the tail bound is negative or non-finite, or if
    /// `sum + tail_bound` is not within `eps` of one.
    pub fn new(masses: Vec<f64>, tail_bound: f64, eps: f64) -> Result<Self> {
        if !(tail_bound >= 0.0 && tail_bound.is_finite()) {
            return Err(AoiError::InvalidPmf(format!("tail bound {tail_bound}")));
        }
        let mut masses = masses;
        let mut tail_bound = tail_bound;
        for (i, mass) in masses.iter_mut().enumerate() {
            if !(*mass >= 0.0 && mass.is_finite()) {
                return Err(AoiError::InvalidPmf(format!("mass {} at n = {}", mass, i + 1)));
            }
            if *mass < UNDERFLOW_FLUSH && *mass > 0.0 {
                tail_bound += *mass;
                *mass = 0.0;
            }
        }
        let pmf = Self {
            masses,
            tail_bound,
            eps,
        };
        let total = pmf.total_with_tail();
        if (total - 1.0).abs() > eps {
            return Err(AoiError::InvalidPmf(format!(
                "stored mass {} + tail {} = {} is not within {eps:e} of 1",
                pmf.stored_mass(),
                pmf.tail_bound,
                total
            )));
        }
        Ok(pmf)
    }

    /// Evaluates `mass(n)` for `n = 1..=horizon`.
    pub fn from_fn(
        horizon: usize,
        tail_bound: f64,
        eps: f64,
        mut mass: impl FnMut(u64) -> f64,
    ) -> Result<Self> {
        let masses = (1..=horizon as u64).map(&mut mass).collect();
        Self::new(masses, tail_bound, eps)
    }

    pub fn support_start(&self) -> u64 {
        1
    }

    /// Largest stored value of `n`.
    pub fn horizon(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Mass at `n`, zero outside the stored support.
    pub fn mass(&self, n: u64) -> f64 {
        if n == 0 {
            return 0.0;
        }
        self.masses.get(n as usize - 1).copied().unwrap_or(0.0)
    }

    pub fn stored_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn total_with_tail(&self) -> f64 {
        self.stored_mass() + self.tail_bound
    }

    /// `sum n * mass(n)` over the stored support.
    ///
    /// For a truncation of a pmf this is a lower bound on the full mean.
    pub fn mean(&self) -> f64 {
        self.masses
            .iter()
            .enumerate()
            .map(|(i, mass)| (i + 1) as f64 * mass)
            .sum()
    }

    /// Running sums `mass(1) + ... + mass(n)`.
    pub fn cumulative(&self) -> Vec<f64> {
        self.masses
            .iter()
            .scan(0.0, |acc, mass| {
                *acc += mass;
                Some(*acc)
            })
            .collect()
    }

    /// Total-variation distance over the shared horizon, with everything
    /// beyond it lumped into one bin per pmf.
    pub fn tv_distance(&self, other: &Pmf) -> f64 {
        let horizon = self.horizon().min(other.horizon()) as u64;
        let mut l1 = 0.0;
        let mut rest_self = 1.0;
        let mut rest_other = 1.0;
        for n in 1..=horizon {
            let (a, b) = (self.mass(n), other.mass(n));
            l1 += (a - b).abs();
            rest_self -= a;
            rest_other -= b;
        }
        l1 += (rest_self.max(0.0) - rest_other.max(0.0)).abs();
        0.5 * l1
    }
}

/// Mean of a stored pmf and the horizon it was computed over.
pub fn pmf_mean(pmf: &Pmf) -> (f64, usize) {
    (pmf.mean(), pmf.horizon())
}
