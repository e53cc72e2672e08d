//! Closed-form evaluators for the bufferless and unbounded systems, the
//! continuous-time baselines and the intensity optimizer.

pub mod continuous;
pub mod infinite;
pub mod limit;
pub mod rho;
pub mod single;

pub use continuous::{aoi_mean_mm1, ContinuousParams};
pub use infinite::InfiniteQueue;
pub use limit::continuous_limit_gap;
pub use rho::{minimize_mean_over_rho, minimize_mean_over_rho_with_grid, RhoOptimum};
pub use single::SingleBuffer;

use crate::error::Result;
use crate::model::{AoiModel, SystemSize};
use crate::params::ModelParams;
use crate::registry::model_for;

/// `Pr{AoI <= n}` for the given closed-form system size.
pub fn aoi_cdf(params: ModelParams, size: SystemSize, n: u64) -> Result<f64> {
    Ok(model_for(size, params)?.cdf(n))
}

/// Horizon for the unbounded-queue pmf at tolerance `eps`.
pub fn truncation_horizon(params: ModelParams, eps: f64) -> Result<u64> {
    InfiniteQueue::new(params)?.truncation_horizon(eps)
}
