//! The closed-form AoI model interface shared by every system size.

use std::fmt;
use std::str::FromStr;

use crate::error::{AoiError, Result};
use crate::params::ModelParams;
use crate::pmf::Pmf;

/// System sizes that admit closed-form AoI results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SystemSize {
    One,
    Infinite,
}

impl SystemSize {
    pub const ALL: [SystemSize; 2] = [SystemSize::One, SystemSize::Infinite];

    /// Registry key, also the spelling accepted on the command line.
    pub fn key(self) -> &'static str {
        match self {
            SystemSize::One => "1",
            SystemSize::Infinite => "inf",
        }
    }
}

impl fmt::Display for SystemSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for SystemSize {
    type Err = AoiError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(SystemSize::One),
            "inf" | "infinite" | "∞" => Ok(SystemSize::Infinite),
            other => Err(AoiError::SizeUnsupported(format!("system size {other:?}"))),
        }
    }
}

/// Stationary AoI distribution and mean of one queue family in closed form.
pub trait AoiModel: fmt::Debug + Send + Sync {
    fn size(&self) -> SystemSize;

    fn params(&self) -> ModelParams;

    /// `Pr{AoI = n}` for `n >= 1`; zero for `n = 0`.
    fn pmf(&self, n: u64) -> f64;

    fn mean(&self) -> f64;

    /// Upper bound on `sum_{n > horizon} pmf(n)`.
    fn tail_mass_bound(&self, horizon: u64) -> f64;

    /// Upper bound on `sum_{n > horizon} n * pmf(n)`.
    fn tail_moment_bound(&self, horizon: u64) -> f64;

    /// `Pr{AoI <= n}`, summed forward from `n = 1`.
    fn cdf(&self, n: u64) -> f64 {
        (1..=n).map(|k| self.pmf(k)).sum()
    }

    /// Smallest horizon whose omitted mass and omitted first moment are both
    /// provably below `eps`.
    fn truncation_horizon(&self, eps: f64) -> Result<u64> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(AoiError::OutOfRange {
                name: "eps",
                value: eps,
                expected: "the open interval (0, 1)",
            });
        }
        let bound = |n: u64| self.tail_mass_bound(n).max(self.tail_moment_bound(n));
        let mut hi = 1u64;
        while !(bound(hi) < eps) {
            if hi >= 1 << 40 {
                return Err(AoiError::InvalidConfig(format!(
                    "no horizon below 2^40 bounds the tail by {eps:e}"
                )));
            }
            hi *= 2;
        }
        let mut lo = hi / 2;
        // invariant: bound(hi) < eps, and bound(lo) >= eps unless lo == 0
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if bound(mid) < eps {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// The pmf stored up to `horizon`, with the analytic tail bound attached.
    fn truncated_pmf(&self, horizon: u64) -> Result<Pmf> {
        let tail = self.tail_mass_bound(horizon);
        let eps = tail + 1e-12 * (horizon as f64 + 1.0);
        Pmf::from_fn(horizon as usize, tail, eps, |n| self.pmf(n).max(0.0))
    }
}

/// `x^n` for unsigned exponents.
pub(crate) fn pow_u(x: f64, n: u64) -> f64 {
    if n <= i32::MAX as u64 {
        x.powi(n as i32)
    } else {
        x.powf(n as f64)
    }
}

/// `sum_{n > horizon} x^n` for `0 <= x < 1`.
pub(crate) fn geometric_tail(x: f64, horizon: u64) -> f64 {
    pow_u(x, horizon + 1) / (1.0 - x)
}

/// `sum_{n > horizon} n x^n` for `0 <= x < 1`.
pub(crate) fn first_moment_tail(x: f64, horizon: u64) -> f64 {
    let k = (horizon + 1) as f64;
    let q = 1.0 - x;
    pow_u(x, horizon + 1) * (k / q + x / (q * q))
}

/// `sum_{n > horizon} n^2 x^n` for `0 <= x < 1`.
pub(crate) fn second_moment_tail(x: f64, horizon: u64) -> f64 {
    let k = (horizon + 1) as f64;
    let q = 1.0 - x;
    pow_u(x, horizon + 1) * (k * k / q + 2.0 * k * x / (q * q) + x * (1.0 + x) / (q * q * q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(x: f64, horizon: u64, power: i32) -> f64 {
        (horizon + 1..horizon + 20_000)
            .map(|n| (n as f64).powi(power) * x.powi(n as i32))
            .sum()
    }

    #[test]
    fn tail_sums_match_brute_force() {
        for &x in &[0.1, 0.5, 0.8, 0.95] {
            for &h in &[0u64, 1, 7, 40] {
                let checks = [
                    (geometric_tail(x, h), brute(x, h, 0)),
                    (first_moment_tail(x, h), brute(x, h, 1)),
                    (second_moment_tail(x, h), brute(x, h, 2)),
                ];
                for (closed, summed) in checks {
                    assert!(
                        (closed - summed).abs() <= 1e-10 * summed.max(1e-300),
                        "x={x} h={h}: {closed} vs {summed}"
                    );
                }
            }
        }
    }

    #[test]
    fn size_keys_round_trip() {
        for size in SystemSize::ALL {
            assert_eq!(size.key().parse::<SystemSize>().unwrap(), size);
        }
        assert!("3".parse::<SystemSize>().is_err());
    }
}
