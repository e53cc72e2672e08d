use thiserror::Error;

/// Errors raised by the analytic evaluators, the chain solver and the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AoiError {
    #[error("OutOfRange: {name} = {value} is outside {expected}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("Unstable: p = {p} must be strictly below gamma = {gamma}")]
    Unstable { p: f64, gamma: f64 },
    #[error("NearSingular: |gamma - p| = {gap:e} is below {tolerance:e} (p = {p}, gamma = {gamma})")]
    NearSingular {
        p: f64,
        gamma: f64,
        gap: f64,
        tolerance: f64,
    },
    #[error("InvalidState: ({n}, {m}) violates {rule}")]
    InvalidState { n: u64, m: u64, rule: &'static str },
    #[error("NoConvergence: {iterations} iterations, last L1 change {l1_delta:e} > {tol:e}")]
    NoConvergence {
        iterations: usize,
        l1_delta: f64,
        tol: f64,
    },
    #[error("SizeUnsupported: no closed form for {0}")]
    SizeUnsupported(String),
    #[error("UnknownModel: {0:?}")]
    UnknownModel(String),
    #[error("InvalidPmf: {0}")]
    InvalidPmf(String),
    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),
}

impl AoiError {
    /// Short variant name, used by front ends when reporting failures.
    pub fn kind(&self) -> &'static str {
        match self {
            AoiError::OutOfRange { .. } => "OutOfRange",
            AoiError::Unstable { .. } => "Unstable",
            AoiError::NearSingular { .. } => "NearSingular",
            AoiError::InvalidState { .. } => "InvalidState",
            AoiError::NoConvergence { .. } => "NoConvergence",
            AoiError::SizeUnsupported(_) => "SizeUnsupported",
            AoiError::UnknownModel(_) => "UnknownModel",
            AoiError::InvalidPmf(_) => "InvalidPmf",
            AoiError::InvalidConfig(_) => "InvalidConfig",
        }
    }
}

pub type Result<T> = std::result::Result<T, AoiError>;
