use thiserror::Error;

/// Failures of the physics layer (analytic formulas and dyad simulator).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CssError {
    #[error("degenerate superposition (alpha = {alpha}, phi = {phi}): the state vanishes")]
    Degenerate { alpha: f64, phi: f64 },

    #[error("event of zero density (density = {density:e})")]
    ZeroDensity { density: f64 },

    #[error("invalid parameter {name} = {value}: expected {expected}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("closed form only covers phi in {{0, pi}} (got phi = {phi}); use the dyad amplifier simulation instead")]
    UnsupportedPhase { phi: f64 },

    #[error("mode index {index} out of range for a {mode_count}-mode state")]
    ModeIndex { index: usize, mode_count: usize },

    #[error("beam splitter needs two distinct modes (got {0} twice)")]
    SameMode(usize),

    #[error("mode count mismatch: {left} vs {right}")]
    ModeMismatch { left: usize, right: usize },

    #[error("state outside model family: residual {residual:e} exceeds {tolerance:e}")]
    OutsideModelFamily { residual: f64, tolerance: f64 },

    #[error("non-physical state: trace = {trace}")]
    NonPhysical { trace: f64 },

    #[error("expected a single-mode state, found {0} modes")]
    NotSingleMode(usize),
}

pub type Result<T, E = CssError> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, value: f64, expected: &'static str) -> CssError {
    CssError::InvalidParameter {
        name,
        value,
        expected,
    }
}
