//! Continuous-time M/M/1 baselines for the bufferless and unbounded systems.

use crate::error::{AoiError, Result};
use crate::model::SystemSize;

/// Service rate `mu` and traffic intensity `rho` of an M/M/1 queue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousParams {
    mu: f64,
    rho: f64,
}

impl ContinuousParams {
    pub fn new(mu: f64, rho: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(AoiError::OutOfRange {
                name: "mu",
                value: mu,
                expected: "(0, inf)",
            });
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(AoiError::OutOfRange {
                name: "rho",
                value: rho,
                expected: "(0, inf)",
            });
        }
        Ok(Self { mu, rho })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

/// Average continuous AoI of the M/M/1/1 or M/M/1/inf system.
pub fn aoi_mean_mm1(cp: ContinuousParams, size: SystemSize) -> Result<f64> {
    let ContinuousParams { mu, rho } = cp;
    match size {
        SystemSize::One => Ok((1.0 + 1.0 / rho + rho / (1.0 + rho)) / mu),
        SystemSize::Infinite => {
            if rho >= 1.0 {
                return Err(AoiError::OutOfRange {
                    name: "rho",
                    value: rho,
                    expected: "(0, 1) for the unbounded queue",
                });
            }
            Ok((1.0 + 1.0 / rho + rho * rho / (1.0 - rho)) / mu)
        }
    }
}
