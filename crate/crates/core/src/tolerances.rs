//! Numerical tolerances shared across the crate.
//!
//! Double-precision eigen-solves on 4x4 and 6x6 matrices are accurate to
//! roughly 1e-13, so the structural tolerances below sit about three orders
//! of magnitude above that floor.

/// Maximum absolute asymmetry accepted in a covariance matrix.
pub const TOL_SYM: f64 = 1e-10;

/// Smallest eigenvalue of `V + iΩ` still counted as physical is `-TOL_PHYS`.
pub const TOL_PHYS: f64 = 1e-9;

/// Entry tolerance when matching the two-mode standard form.
pub const TOL_FORM: f64 = 1e-9;

/// Symplectic eigenvalues of the partial transpose at or above `1 - TOL_SEP`
/// count as separable.
pub const TOL_SEP: f64 = 1e-9;

/// Symplecticity tolerance `‖MᵀΩM − Ω‖_max`.
pub const TOL_SYMPLECTIC: f64 = 1e-10;

/// A state is pure when `|det V - 1|` is below this.
pub const TOL_PURE: f64 = 1e-6;

/// Squeezing magnitudes above this are rejected; `cosh(20)` is still well
/// conditioned, larger values are not.
pub const MAX_SQUEEZE: f64 = 10.0;

/// Fock-space population allowed in the top 10% of the truncated basis.
pub const TAIL_MASS_LIMIT: f64 = 1e-6;
