//! Symplectic building blocks (single-mode squeezer and rotator, two-mode
//! squeezer, beam splitter), their composition, and the action of maps,
//! displacements and detector loss on Gaussian states.
//!
//! A map `M` acts on a state as `V ↦ MᵀVM`, `d ↦ dM` with `d` a row vector.

use nalgebra::{DMatrix, DVector};

use crate::error::{CvError, Result};
use crate::gaussian::{GaussianState, MAX_MODES};
use crate::linalg::{max_abs, symplectic_form};
use crate::tolerances::{MAX_SQUEEZE, TOL_SYMPLECTIC};

#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMap {
    matrix: DMatrix<f64>,
}

fn check_squeeze(s: f64) -> Result<()> {
    if s.is_finite() && s.abs() <= MAX_SQUEEZE {
        Ok(())
    } else {
        Err(CvError::ParameterOutOfRange {
            name: "s",
            value: s,
            range: "|s| <= 10",
        })
    }
}

fn check_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(CvError::ParameterOutOfRange {
            name,
            value,
            range: "finite",
        })
    }
}

fn check_mode(n_modes: usize, mode: usize) -> Result<()> {
    if !(1..=MAX_MODES).contains(&n_modes) {
        return Err(CvError::UnsupportedModeCount(n_modes));
    }
    if mode >= n_modes {
        return Err(CvError::ModeOutOfRange { mode, n_modes });
    }
    Ok(())
}

fn check_pair(n_modes: usize, a: usize, b: usize) -> Result<()> {
    check_mode(n_modes, a)?;
    check_mode(n_modes, b)?;
    if a == b {
        return Err(CvError::ModeCollision(a));
    }
    Ok(())
}

impl SymplecticMap {
    pub fn identity(n_modes: usize) -> Result<Self> {
        if !(1..=MAX_MODES).contains(&n_modes) {
            return Err(CvError::UnsupportedModeCount(n_modes));
        }
        Ok(Self {
            matrix: DMatrix::identity(2 * n_modes, 2 * n_modes),
        })
    }

    /// Wraps an arbitrary matrix, rejecting it unless `MᵀΩM = Ω`.
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim % 2 != 0 || matrix.ncols() != dim {
            return Err(CvError::DimensionMismatch {
                expected: dim + dim % 2,
                got: matrix.ncols(),
            });
        }
        if !(1..=MAX_MODES).contains(&(dim / 2)) {
            return Err(CvError::UnsupportedModeCount(dim / 2));
        }
        let map = Self { matrix };
        let err = map.symplecticity_error();
        if err > TOL_SYMPLECTIC {
            return Err(CvError::ParameterOutOfRange {
                name: "symplecticity error",
                value: err,
                range: "<= 1e-10",
            });
        }
        Ok(map)
    }

    /// Single-mode squeezer `diag(e⁻ˢ, eˢ)` on `mode`.
    pub fn squeeze(n_modes: usize, mode: usize, s: f64) -> Result<Self> {
        check_mode(n_modes, mode)?;
        check_squeeze(s)?;
        let mut map = Self::identity(n_modes)?;
        map.matrix[(2 * mode, 2 * mode)] = (-s).exp();
        map.matrix[(2 * mode + 1, 2 * mode + 1)] = s.exp();
        Ok(map)
    }

    /// Phase rotation `[[cos φ, sin φ], [−sin φ, cos φ]]` on `mode`.
    pub fn rotate(n_modes: usize, mode: usize, phi: f64) -> Result<Self> {
        check_mode(n_modes, mode)?;
        check_finite("phi", phi)?;
        let (sin, cos) = phi.sin_cos();
        let mut map = Self::identity(n_modes)?;
        let k = 2 * mode;
        map.matrix[(k, k)] = cos;
        map.matrix[(k, k + 1)] = sin;
        map.matrix[(k + 1, k)] = -sin;
        map.matrix[(k + 1, k + 1)] = cos;
        Ok(map)
    }

    /// Two-mode squeezer: `cosh s` on the diagonal blocks, `sinh s · σ_z` on
    /// the cross blocks.
    pub fn two_mode_squeeze(n_modes: usize, mode_a: usize, mode_b: usize, s: f64) -> Result<Self> {
        check_pair(n_modes, mode_a, mode_b)?;
        check_squeeze(s)?;
        let (ch, sh) = (s.cosh(), s.sinh());
        let mut map = Self::identity(n_modes)?;
        let (a, b) = (2 * mode_a, 2 * mode_b);
        for (i, sign) in [(0, 1.0), (1, -1.0)] {
            map.matrix[(a + i, a + i)] = ch;
            map.matrix[(b + i, b + i)] = ch;
            map.matrix[(a + i, b + i)] = sign * sh;
            map.matrix[(b + i, a + i)] = sign * sh;
        }
        Ok(map)
    }

    /// Beam splitter with `t = cos θ`, `r = sin θ`: blocks `[[t, −r], [r, t]]`
    /// (each entry times the 2x2 identity).
    pub fn beam_split(n_modes: usize, mode_a: usize, mode_b: usize, theta: f64) -> Result<Self> {
        check_pair(n_modes, mode_a, mode_b)?;
        check_finite("theta", theta)?;
        let (r, t) = theta.sin_cos();
        let mut map = Self::identity(n_modes)?;
        let (a, b) = (2 * mode_a, 2 * mode_b);
        for i in 0..2 {
            map.matrix[(a + i, a + i)] = t;
            map.matrix[(b + i, b + i)] = t;
            map.matrix[(a + i, b + i)] = -r;
            map.matrix[(b + i, a + i)] = r;
        }
        Ok(map)
    }

    /// Local map `A ⊕ B` from two single-mode maps.
    pub fn local(a: &Self, b: &Self) -> Result<Self> {
        let (n, m) = (a.matrix.nrows(), b.matrix.nrows());
        if !(1..=MAX_MODES).contains(&((n + m) / 2)) {
            return Err(CvError::UnsupportedModeCount((n + m) / 2));
        }
        let mut matrix = DMatrix::zeros(n + m, n + m);
        matrix.view_mut((0, 0), (n, n)).copy_from(&a.matrix);
        matrix.view_mut((n, n), (m, m)).copy_from(&b.matrix);
        Ok(Self { matrix })
    }

    pub fn n_modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Map equivalent to applying `inner` first and then `self`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if self.matrix.nrows() != inner.matrix.nrows() {
            return Err(CvError::DimensionMismatch {
                expected: self.matrix.nrows(),
                got: inner.matrix.nrows(),
            });
        }
        Ok(Self {
            matrix: &inner.matrix * &self.matrix,
        })
    }

    /// Map equivalent to applying `self` first and then `next`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        next.compose(self)
    }

    /// `‖MᵀΩM − Ω‖_max`.
    pub fn symplecticity_error(&self) -> f64 {
        let omega = symplectic_form(self.n_modes());
        max_abs(&(self.matrix.transpose() * &omega * &self.matrix - omega))
    }

    pub fn apply(&self, state: &GaussianState) -> Result<GaussianState> {
        if state.dim() != self.matrix.nrows() {
            return Err(CvError::DimensionMismatch {
                expected: self.matrix.nrows(),
                got: state.dim(),
            });
        }
        let m = &self.matrix;
        let cov = m.transpose() * state.cov() * m;
        let mean = m.transpose() * state.mean();
        Ok(GaussianState::from_parts_unchecked(cov, mean))
    }
}

/// Shifts the quadrature means of `mode` by `(dq, dp)`; the covariance is
/// untouched.
pub fn displace(state: &GaussianState, mode: usize, dq: f64, dp: f64) -> Result<GaussianState> {
    state.check_mode(mode)?;
    check_finite("dq", dq)?;
    check_finite("dp", dp)?;
    let mut mean = state.mean().clone();
    mean[2 * mode] += dq;
    mean[2 * mode + 1] += dp;
    Ok(GaussianState::from_parts_unchecked(
        state.cov().clone(),
        mean,
    ))
}

/// Uniform detector loss: `V ↦ ηV + (1 − η)·1`, `d ↦ √η d`, equivalent to a
/// beam splitter of transmissivity `η` mixing every mode with vacuum.
pub fn apply_loss(state: &GaussianState, eta: f64) -> Result<GaussianState> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(CvError::ParameterOutOfRange {
            name: "eta",
            value: eta,
            range: "[0, 1]",
        });
    }
    let dim = state.dim();
    let cov = state.cov() * eta + DMatrix::<f64>::identity(dim, dim) * (1.0 - eta);
    let mean: DVector<f64> = state.mean() * eta.sqrt();
    Ok(GaussianState::from_parts_unchecked(cov, mean))
}
