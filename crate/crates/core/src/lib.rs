//! Discrete age of information (AoI) for status-update systems with
//! Bernoulli arrivals, geometric service and FCFS order.
//!
//! * [`analytic`]: closed forms for capacity one and unbounded capacity,
//!   reached through the [`registry`] by system size.
//! * [`chain`]: the two-dimensional age Markov chain solved numerically on a
//!   truncated state space, used as an independent oracle.
//! * [`sim`]: a slot-level simulator for any capacity.
//! * [`validation`]: the cross-check suite tying the three together.

pub mod analytic;
pub mod chain;
pub mod error;
pub mod model;
pub mod params;
pub mod pmf;
pub mod registry;
pub mod sim;
pub mod validation;

pub use error::{AoiError, Result};
pub use model::{AoiModel, SystemSize};
pub use params::{validate_params, AgeState, ModelParams};
pub use pmf::{pmf_mean, Pmf};
pub use registry::{model_for, ModelRegistry};
