//! Minimizing the mean AoI over the traffic intensity at fixed service probability.

use crate::error::{AoiError, Result};
use crate::model::SystemSize;
use crate::params::ModelParams;
use crate::registry::model_for;

/// Margin kept from both ends of the intensity interval `(0, 1)`.
pub const RHO_MARGIN: f64 = 1e-4;

/// Default number of grid points before golden-section refinement.
pub const DEFAULT_GRID_POINTS: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhoOptimum {
    /// Mean AoI is minimized at `rho` (intensity `p / gamma`), with value `mean`.
    Interior { rho: f64, mean: f64 },
    /// Mean AoI strictly decreases over the whole grid.
    Decreasing,
}

impl RhoOptimum {
    pub fn rho(&self) -> Option<f64> {
        match self {
            RhoOptimum::Interior { rho, .. } => Some(*rho),
            RhoOptimum::Decreasing => None,
        }
    }
}

/// Discrete mean AoI as a function of the intensity, for fixed `gamma`.
pub fn mean_at_intensity(gamma: f64, rho: f64, size: SystemSize) -> Result<f64> {
    let params = ModelParams::new(rho * gamma, gamma)?;
    Ok(model_for(size, params)?.mean())
}

/// Evenly spaced intensities on `[margin, 1 - margin]`.
pub fn intensity_grid(points: usize, margin: f64) -> Vec<f64> {
    let span = 1.0 - 2.0 * margin;
    (0..points)
        .map(|i| margin + span * i as f64 / (points - 1) as f64)
        .collect()
}

pub fn minimize_mean_over_rho(gamma: f64, size: SystemSize) -> Result<RhoOptimum> {
    minimize_mean_over_rho_with_grid(gamma, size, DEFAULT_GRID_POINTS)
}

pub fn minimize_mean_over_rho_with_grid(gamma: f64, size: SystemSize, points: usize) -> Result<RhoOptimum> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(AoiError::OutOfRange {
            name: "gamma",
            value: gamma,
            expected: "the open interval (0, 1)",
        });
    }
    if points < 3 {
        return Err(AoiError::InvalidConfig(format!("grid needs at least 3 points, got {points}")));
    }
    let f = |rho: f64| mean_at_intensity(gamma, rho, size);
    let grid = intensity_grid(points, RHO_MARGIN);
    let values = grid.iter().map(|&rho| f(rho)).collect::<Result<Vec<_>>>()?;

    if values.windows(2).all(|w| w[1] < w[0]) {
        return Ok(RhoOptimum::Decreasing);
    }
    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty grid");
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(points - 1)];
    let rho = golden_section(lo, hi, 1e-12, |x| f(x).unwrap_or(f64::INFINITY));
    Ok(RhoOptimum::Interior { rho, mean: f(rho)? })
}

/// Golden-section search for a minimum of a unimodal `f` on `[lo, hi]`.
pub fn golden_section(mut lo: f64, mut hi: f64, tol: f64, f: impl Fn(f64) -> f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}
