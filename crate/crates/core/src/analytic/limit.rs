//! Gap between the discrete mean AoI and its continuous-time counterpart.

use crate::analytic::continuous::{aoi_mean_mm1, ContinuousParams};
use crate::analytic::rho::mean_at_intensity;
use crate::error::{AoiError, Result};
use crate::model::SystemSize;

/// `|gamma * discrete mean - mu * continuous mean|` with `mu = 1` and the
/// discrete intensity set to `rho`. Vanishes as `gamma -> 0`.
pub fn continuous_limit_gap(rho: f64, gamma: f64, size: SystemSize) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(AoiError::OutOfRange {
            name: "rho",
            value: rho,
            expected: "the open interval (0, 1)",
        });
    }
    let discrete = mean_at_intensity(gamma, rho, size)?;
    let continuous = aoi_mean_mm1(ContinuousParams::new(1.0, rho)?, size)?;
    Ok((gamma * discrete - continuous).abs())
}
