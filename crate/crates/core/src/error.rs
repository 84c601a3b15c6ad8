use thiserror::Error;

/// Errors raised by state construction, transforms and analyses.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CvError {
    #[error("unsupported mode count {0} (expected 1, 2 or 3)")]
    UnsupportedModeCount(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("mode {mode} out of range for a {n_modes}-mode state")]
    ModeOutOfRange { mode: usize, n_modes: usize },

    #[error("two-mode operation needs distinct modes, got {0} twice")]
    ModeCollision(usize),

    #[error("covariance matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("unphysical state: {0}")]
    Unphysical(String),

    #[error("parameter `{name}` = {value} outside its allowed range {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("covariance does not match the two-mode standard form: {0}")]
    FormMismatch(String),

    #[error("singular matrix in {0}")]
    Singular(&'static str),

    #[error("state is separable; {0} is only defined for entangled states")]
    NotEntangled(&'static str),

    #[error("fock cutoff {cutoff} too small: tail mass {tail_mass:e} >= {limit:e}")]
    CutoffTooSmall {
        cutoff: usize,
        tail_mass: f64,
        limit: f64,
    },

    #[error("fock cutoff {cutoff} exceeds the limit {limit} for {n_modes}-mode densities")]
    CutoffLimit {
        cutoff: usize,
        limit: usize,
        n_modes: usize,
    },

    #[error("invalid recipe: {0}")]
    Recipe(String),

    #[error("sample batch needs at least one shot")]
    ZeroShots,

    #[error("joint homodyne on a single mode ({0}) measures non-commuting quadratures")]
    NonCommuting(usize),

    #[error("eigen-decomposition did not converge")]
    EigenFailure,
}

pub type Result<T> = std::result::Result<T, CvError>;
