//! Closed forms for the bufferless system (capacity one, arrivals to a busy
//! server are discarded).

use crate::error::Result;
use crate::model::{first_moment_tail, geometric_tail, pow_u, second_moment_tail, AoiModel, SystemSize};
use crate::params::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleBuffer {
    params: ModelParams,
}

impl SingleBuffer {
    /// Any `p`, `gamma` in `(0, 1)` away from `p = gamma`. The mean is regular
    /// at `p = gamma` but shares the pmf's domain.
    pub fn new(params: ModelParams) -> Result<Self> {
        params.ensure_nonsingular()?;
        Ok(Self { params })
    }

    /// Coefficients `(a, b)` of `pmf(n) = a [(1-p)^n - (1-gamma)^n] - b n (1-gamma)^n`.
    fn coefficients(&self) -> (f64, f64) {
        let (p, g) = (self.params.p(), self.params.gamma());
        let denom = p + g - p * g;
        let gap = g - p;
        let a = p * (1.0 - p) * g * g * g / (denom * gap * gap);
        let b = (p * g) * (p * g) / (denom * gap);
        (a, b)
    }
}

impl AoiModel for SingleBuffer {
    fn size(&self) -> SystemSize {
        SystemSize::One
    }

    fn params(&self) -> ModelParams {
        self.params
    }

    fn pmf(&self, n: u64) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let (p, g) = (self.params.p(), self.params.gamma());
        let (a, b) = self.coefficients();
        let idle = pow_u(1.0 - g, n);
        a * (pow_u(1.0 - p, n) - idle) - b * n as f64 * idle
    }

    fn mean(&self) -> f64 {
        let g = self.params.gamma();
        let rho = self.params.rho_d();
        ((1.0 - g) + 1.0 / rho + rho / (1.0 / (1.0 - g) + rho)) / g
    }

    fn tail_mass_bound(&self, horizon: u64) -> f64 {
        let (p, g) = (self.params.p(), self.params.gamma());
        let (a, b) = self.coefficients();
        if p < g {
            // both subtracted terms are non-negative
            a * geometric_tail(1.0 - p, horizon)
        } else {
            // a [(1-p)^n - (1-gamma)^n] <= 0 and -b > 0
            -b * first_moment_tail(1.0 - g, horizon)
        }
    }

    fn tail_moment_bound(&self, horizon: u64) -> f64 {
        let (p, g) = (self.params.p(), self.params.gamma());
        let (a, b) = self.coefficients();
        if p < g {
            a * first_moment_tail(1.0 - p, horizon)
        } else {
            -b * second_moment_tail(1.0 - g, horizon)
        }
    }
}
