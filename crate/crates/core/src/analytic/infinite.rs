//! Closed forms for the unbounded (lossless) FCFS queue.

use crate::error::{AoiError, Result};
use crate::model::{first_moment_tail, geometric_tail, pow_u, AoiModel, SystemSize};
use crate::params::ModelParams;

/// Stationary law of the two-dimensional age process `(n, m)` and of the AoI
/// for Bernoulli(p) arrivals, Geometric(gamma) service and an unbounded buffer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfiniteQueue {
    params: ModelParams,
}

impl InfiniteQueue {
    /// Requires `p < gamma` and `|gamma - p| >= 1e-9`.
    pub fn new(params: ModelParams) -> Result<Self> {
        params.ensure_nonsingular()?;
        params.ensure_stable()?;
        Ok(Self { params })
    }

    /// Ratio `(1 - gamma) / (1 - p)`, the decay rate of the service-age marginal.
    pub fn service_age_ratio(&self) -> f64 {
        (1.0 - self.params.gamma()) / (1.0 - self.params.p())
    }

    /// Probability of state `(n, 0)`: AoI `n` with an empty system.
    pub fn pi_empty(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(AoiError::InvalidState {
                n,
                m: 0,
                rule: "n >= 1",
            });
        }
        let (p, g) = (self.params.p(), self.params.gamma());
        Ok(p / (1.0 - p) * (pow_u(1.0 - p, n) - pow_u(1.0 - g, n)))
    }

    /// Probability of state `(n, m)` with a packet of age `m >= 1` in service.
    pub fn pi_busy(&self, n: u64, m: u64) -> Result<f64> {
        if m == 0 || m >= n {
            return Err(AoiError::InvalidState {
                n,
                m,
                rule: "n > m >= 1",
            });
        }
        let (p, g) = (self.params.p(), self.params.gamma());
        let r = self.service_age_ratio();
        let arrival = p * p / (1.0 - p) * pow_u(1.0 - p, n) * pow_u(r, m);
        let drain = p * g * pow_u(1.0 - g, n - 1);
        let backlog = p * (g - p) / ((1.0 - p) * (1.0 - g)) * pow_u(r, m) * pow_u(1.0 - g, n - m);
        let value = arrival - drain + backlog;

        #[cfg(debug_assertions)]
        {
            // same value with (1-p)^(n-m) (1-gamma)^m in the first term
            let alt = p * p / (1.0 - p) * pow_u(1.0 - p, n - m) * pow_u(1.0 - g, m) - drain + backlog;
            let scale = arrival.abs().max(drain).max(backlog.abs()).max(f64::MIN_POSITIVE);
            debug_assert!(
                (alt - value).abs() <= 1e-12 * scale,
                "pi_busy forms disagree at ({n}, {m}): {value} vs {alt}"
            );
        }
        Ok(value)
    }

    /// Any state, dispatching on whether the system is empty.
    pub fn pi(&self, n: u64, m: u64) -> Result<f64> {
        if m == 0 {
            self.pi_empty(n)
        } else {
            self.pi_busy(n, m)
        }
    }

    /// `f_m = sum_{n > m} pi(n, m)`, the stationary law of the in-service age.
    pub fn marginal_service_age(&self, m: u64) -> f64 {
        let (p, g) = (self.params.p(), self.params.gamma());
        let idle = (g - p) / ((1.0 - p) * g);
        if m == 0 {
            idle
        } else {
            p * idle * pow_u(self.service_age_ratio(), m)
        }
    }

    /// Mean AoI in the expanded rational form.
    pub fn mean_expanded(&self) -> f64 {
        self.expanded_mean_terms().iter().sum()
    }

    fn expanded_mean_terms(&self) -> [f64; 3] {
        let (p, g) = (self.params.p(), self.params.gamma());
        [
            (1.0 - p) * (p + g) / (p * (g - p)),
            p * (1.0 - g) * (p - 2.0 * g) / (g * g * (g - p)),
            -1.0 / g,
        ]
    }

    /// Mean AoI written with the traffic intensity.
    pub fn mean_intensity_form(&self) -> f64 {
        let g = self.params.gamma();
        let rho = self.params.rho_d();
        ((1.0 - g) + 1.0 / rho + rho * rho * (1.0 - g) / (1.0 - rho)) / g
    }
}

impl AoiModel for InfiniteQueue {
    fn size(&self) -> SystemSize {
        SystemSize::Infinite
    }

    fn params(&self) -> ModelParams {
        self.params
    }

    fn pmf(&self, n: u64) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let (p, g) = (self.params.p(), self.params.gamma());
        let decay = pow_u(1.0 - g, n - 1);
        p * g / (g - p) * pow_u(1.0 - p, n)
            - (p * p * (1.0 - g) / (g - p) + g) * decay
            + (g - p) / (1.0 - p) * pow_u(self.service_age_ratio(), n - 1)
            - p * g * (n - 1) as f64 * decay
    }

    fn mean(&self) -> f64 {
        let mean = self.mean_intensity_form();
        #[cfg(debug_assertions)]
        {
            let terms = self.expanded_mean_terms();
            let expanded: f64 = terms.iter().sum();
            let scale = terms.iter().fold(mean.abs(), |acc, t| acc.max(t.abs()));
            debug_assert!(
                (expanded - mean).abs() <= 1e-12 * scale,
                "mean forms disagree: {mean} vs {expanded}"
            );
        }
        mean
    }

    fn tail_mass_bound(&self, horizon: u64) -> f64 {
        // the two subtracted terms are non-negative, so the positive ones dominate
        let (p, g) = (self.params.p(), self.params.gamma());
        let r = self.service_age_ratio();
        p * g / (g - p) * geometric_tail(1.0 - p, horizon)
            + (g - p) / (1.0 - p) * geometric_tail(r, horizon) / r
    }

    fn tail_moment_bound(&self, horizon: u64) -> f64 {
        let (p, g) = (self.params.p(), self.params.gamma());
        let r = self.service_age_ratio();
        p * g / (g - p) * first_moment_tail(1.0 - p, horizon)
            + (g - p) / (1.0 - p) * first_moment_tail(r, horizon) / r
    }
}
