//! Model parameters and the two-dimensional age state.

use crate::error::{AoiError, Result};

/// Smallest admissible `|gamma - p|` for formulas with a `(gamma - p)` denominator.
pub const NEAR_SINGULAR_TOL: f64 = 1e-9;

/// Per-slot arrival probability `p` and service-completion probability `gamma`.
///
/// Both lie strictly inside `(0, 1)`. The traffic intensity `p / gamma` is
/// recomputed on demand rather than stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    p: f64,
    gamma: f64,
}

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(AoiError::OutOfRange {
            name,
            value,
            expected: "the open interval (0, 1)",
        })
    }
}

impl ModelParams {
    /// Range-checked construction; no stability requirement.
    pub fn new(p: f64, gamma: f64) -> Result<Self> {
        check_probability("p", p)?;
        check_probability("gamma", gamma)?;
        Ok(Self { p, gamma })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn rho_d(&self) -> f64 {
        self.p / self.gamma
    }

    /// Rejects parameters whose `(gamma - p)` denominators lose too much precision.
    pub fn ensure_nonsingular(&self) -> Result<()> {
        let gap = (self.gamma - self.p).abs();
        if gap < NEAR_SINGULAR_TOL {
            return Err(AoiError::NearSingular {
                p: self.p,
                gamma: self.gamma,
                gap,
                tolerance: NEAR_SINGULAR_TOL,
            });
        }
        Ok(())
    }

    /// Requires `p < gamma`, i.e. a stable unbounded queue.
    pub fn ensure_stable(&self) -> Result<()> {
        if self.p >= self.gamma {
            return Err(AoiError::Unstable {
                p: self.p,
                gamma: self.gamma,
            });
        }
        Ok(())
    }
}

/// Validates raw parameters. With `requires_stability` the result is also
/// usable by the unbounded-queue closed forms (`p < gamma`, not near-singular).
pub fn validate_params(p: f64, gamma: f64, requires_stability: bool) -> Result<ModelParams> {
    let params = ModelParams::new(p, gamma)?;
    if requires_stability {
        params.ensure_nonsingular()?;
        params.ensure_stable()?;
    }
    Ok(params)
}

/// State `(n, m)` of the age process: current AoI `n` and age `m` of the
/// packet in service, with `m = 0` meaning the system is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AgeState {
    n: u64,
    m: u64,
}

impl AgeState {
    pub fn new(n: u64, m: u64) -> Result<Self> {
        if n == 0 || m >= n {
            return Err(AoiError::InvalidState {
                n,
                m,
                rule: "n >= 1 and 0 <= m < n",
            });
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn is_empty_system(&self) -> bool {
        self.m == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_params_derive_rho() {
        let params = validate_params(0.2, 0.5, true).unwrap();
        assert_eq!(params.p(), 0.2);
        assert_eq!(params.gamma(), 0.5);
        assert_eq!(params.rho_d(), 0.2 / 0.5);
        assert!((params.rho_d() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn unstable_rejected_only_when_required() {
        assert!(matches!(
            validate_params(0.5, 0.2, true),
            Err(AoiError::Unstable { .. })
        ));
        assert!(validate_params(0.5, 0.2, false).is_ok());
    }

    #[test]
    fn near_singular_rejected() {
        assert!(matches!(
            validate_params(0.3, 0.3 + 1e-12, true),
            Err(AoiError::NearSingular { .. })
        ));
        assert!(matches!(
            ModelParams::new(0.3, 0.3).unwrap().ensure_nonsingular(),
            Err(AoiError::NearSingular { .. })
        ));
        assert!(validate_params(0.3, 0.3 + 1e-6, true).is_ok());
    }

    #[test]
    fn out_of_range() {
        for (p, g) in [(0.0, 0.5), (1.0, 0.5), (0.2, 1.0), (-0.1, 0.5), (f64::NAN, 0.5), (0.2, 1.5)] {
            assert!(
                matches!(validate_params(p, g, false), Err(AoiError::OutOfRange { .. })),
                "({p}, {g})"
            );
        }
    }

    #[test]
    fn construction_is_deterministic() {
        assert_eq!(ModelParams::new(0.1, 0.9), ModelParams::new(0.1, 0.9));
    }

    #[test]
    fn age_state_invariants() {
        assert!(AgeState::new(1, 0).is_ok());
        assert!(AgeState::new(3, 2).is_ok());
        assert!(AgeState::new(0, 0).is_err());
        assert!(AgeState::new(2, 2).is_err());
        assert!(AgeState::new(1, 1).is_err());
        assert!(AgeState::new(5, 0).unwrap().is_empty_system());
    }
}
