use thiserror::Error;

/// Errors raised by the reaction solvers and their oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KineticsError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("concentration {0} is outside [0, 1]")]
    ConcentrationOutOfRange(f64),

    #[error("time {0} must be non-negative")]
    NegativeTime(f64),

    #[error("rates are degenerate (a = b = {0}); use the a = b solver")]
    DegenerateRates(f64),

    #[error("phase argument s = {0} lies outside the tanh branch (|s| < 1)")]
    OutsideTanhDomain(f64),

    #[error("x = {0} is the equilibrium; its phase is saturated at +inf")]
    PhaseSaturated(f64),

    #[error("time grid must be non-empty, finite, non-negative and strictly increasing")]
    InvalidGrid,

    #[error("step dt = {dt} must satisfy 0 < dt <= t_end = {t_end}")]
    InvalidStep { dt: f64, t_end: f64 },

    #[error("particle count must be at least 2, got {0}")]
    TooFewParticles(u64),

    #[error("ensemble needs at least 2 trials, got {0}")]
    TooFewTrials(usize),

    #[error("degeneracy must be at least 1")]
    InvalidDegeneracy,

    #[error("fugacity overflows: mu/kT = {0} exceeds 700")]
    FugacityOverflow(f64),
}

pub type Result<T> = std::result::Result<T, KineticsError>;

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(KineticsError::NonPositive { name, value })
    }
}

pub(crate) fn ensure_time(t: f64) -> Result<f64> {
    if t >= 0.0 && !t.is_nan() {
        Ok(t)
    } else {
        Err(KineticsError::NegativeTime(t))
    }
}
