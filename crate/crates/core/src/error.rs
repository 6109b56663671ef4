use alloc::string::String;
use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("coherent state tail beyond n_max carries weight {weight:.3e} (limit {limit:.1e})")]
    TruncationTail { weight: f64, limit: f64 },

    #[error("operator is not Hermitian (max |H - H^dag| = {max_dev:.3e})")]
    NotHermitian { max_dev: f64 },

    #[error("resonant regime (Delta_- = 0): dispersive quantities undefined")]
    ResonantRegime,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{guard} guard violated at t = {t:.6e} (magnitude {magnitude:.3e}, limit {limit:.1e})")]
    GuardViolation {
        guard: GuardKind,
        t: f64,
        magnitude: f64,
        limit: f64,
    },

    #[error("non-finite amplitudes at t = {t:.6e}: numerical blowup")]
    NumericalBlowup { t: f64 },

    #[error("empty grid")]
    EmptyGrid,

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuardKind {
    /// Population of the top two Fock levels exceeded the allowance.
    FockTail,
    /// |‖ψ‖² − 1| exceeded the allowance.
    Norm,
}

impl core::fmt::Display for GuardKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GuardKind::FockTail => write!(f, "fock-tail"),
            GuardKind::Norm => write!(f, "norm"),
        }
    }
}
