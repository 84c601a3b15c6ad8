//! Gaussian state representation.
//!
//! Conventions: quadratures `q = a + a†`, `p = i(a† − a)`, ordered
//! `(q₁, p₁, q₂, p₂, …)`. The vacuum has covariance `V = 1` and zero mean.
//! The uncertainty principle reads `V + iΩ ≥ 0` with `Ω` block-diagonal
//! (see [`symplectic_form`]).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CvError, Result};
use crate::linalg::{hermitian_eigenvalues, max_asymmetry, symplectic_form};
use crate::tolerances::{TOL_FORM, TOL_PHYS, TOL_SYM};

pub const MAX_MODES: usize = 3;

/// Covariance matrix plus quadrature means of an `n`-mode Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    cov: DMatrix<f64>,
    mean: DVector<f64>,
}

/// Outcome of [`GaussianState::validate_physical`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalityReport {
    pub physical: bool,
    /// Smallest eigenvalue of the Hermitian matrix `V + iΩ`.
    pub min_eigenvalue: f64,
}

fn check_modes(n_modes: usize) -> Result<()> {
    if (1..=MAX_MODES).contains(&n_modes) {
        Ok(())
    } else {
        Err(CvError::UnsupportedModeCount(n_modes))
    }
}

impl GaussianState {
    /// Builds a state from a covariance matrix and mean vector. Only shape
    /// and symmetry are checked; use [`GaussianState::validate_physical`] for
    /// the uncertainty principle.
    pub fn new(cov: DMatrix<f64>, mean: DVector<f64>) -> Result<Self> {
        let dim = cov.nrows();
        if dim % 2 != 0 {
            return Err(CvError::DimensionMismatch {
                expected: dim + 1,
                got: dim,
            });
        }
        check_modes(dim / 2)?;
        if cov.ncols() != dim {
            return Err(CvError::DimensionMismatch {
                expected: dim,
                got: cov.ncols(),
            });
        }
        if mean.len() != dim {
            return Err(CvError::DimensionMismatch {
                expected: dim,
                got: mean.len(),
            });
        }
        if cov.iter().chain(mean.iter()).any(|x| !x.is_finite()) {
            return Err(CvError::Unphysical("non-finite entries".into()));
        }
        let asym = max_asymmetry(&cov);
        if asym > TOL_SYM {
            return Err(CvError::NotSymmetric(asym));
        }
        // store the exactly symmetric part
        let cov = (&cov + cov.transpose()) * 0.5;
        Ok(Self { cov, mean })
    }

    /// Like [`GaussianState::new`] but additionally rejects states violating
    /// the uncertainty principle.
    pub fn new_physical(cov: DMatrix<f64>, mean: DVector<f64>) -> Result<Self> {
        let state = Self::new(cov, mean)?;
        let report = state.validate_physical();
        if !report.physical {
            return Err(CvError::Unphysical(format!(
                "min eigenvalue of V + iΩ is {:e}",
                report.min_eigenvalue
            )));
        }
        Ok(state)
    }

    pub fn from_rows(rows: &[Vec<f64>], mean: &[f64]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(CvError::DimensionMismatch {
                expected: dim,
                got: bad.len(),
            });
        }
        let cov = DMatrix::from_fn(dim, dim, |i, j| rows[i][j]);
        Self::new(cov, DVector::from_column_slice(mean))
    }

    pub fn vacuum(n_modes: usize) -> Result<Self> {
        check_modes(n_modes)?;
        let dim = 2 * n_modes;
        Ok(Self {
            cov: DMatrix::identity(dim, dim),
            mean: DVector::zeros(dim),
        })
    }

    /// Product of thermal states, `V = diag(ñ₁, ñ₁, ñ₂, ñ₂, …)`. Each
    /// occupation `ñ = 2n̄ + 1` must be at least 1 (the vacuum).
    pub fn thermal(occupations: &[f64]) -> Result<Self> {
        check_modes(occupations.len())?;
        for &n in occupations {
            if !(n >= 1.0) || !n.is_finite() {
                return Err(CvError::Unphysical(format!(
                    "thermal occupation {n} below the vacuum value 1"
                )));
            }
        }
        let diag: Vec<f64> = occupations.iter().flat_map(|&n| [n, n]).collect();
        Ok(Self {
            cov: DMatrix::from_diagonal(&DVector::from_vec(diag)),
            mean: DVector::zeros(2 * occupations.len()),
        })
    }

    /// Two-mode state with covariance in the standard form
    /// `[[n₁,0,c₁,0],[0,n₂,0,c₂],[c₁,0,n₁,0],[0,c₂,0,n₂]]`.
    pub fn from_standard_form(params: &StandardFormParams) -> Result<Self> {
        let StandardFormParams { n1, n2, c1, c2, .. } = *params;
        #[rustfmt::skip]
        let cov = DMatrix::from_row_slice(4, 4, &[
            n1, 0.0, c1, 0.0,
            0.0, n2, 0.0, c2,
            c1, 0.0, n1, 0.0,
            0.0, c2, 0.0, n2,
        ]);
        Self::new(cov, DVector::zeros(4))
    }

    pub fn n_modes(&self) -> usize {
        self.cov.nrows() / 2
    }

    pub fn dim(&self) -> usize {
        self.cov.nrows()
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov_rows(&self) -> Vec<Vec<f64>> {
        self.cov
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }

    pub fn det(&self) -> f64 {
        self.cov.determinant()
    }

    pub(crate) fn from_parts_unchecked(cov: DMatrix<f64>, mean: DVector<f64>) -> Self {
        let cov = (&cov + cov.transpose()) * 0.5;
        Self { cov, mean }
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode < self.n_modes() {
            Ok(())
        } else {
            Err(CvError::ModeOutOfRange {
                mode,
                n_modes: self.n_modes(),
            })
        }
    }

    /// Reduced state of the listed modes, in the order given.
    pub fn marginal(&self, modes: &[usize]) -> Result<Self> {
        for (k, &m) in modes.iter().enumerate() {
            self.check_mode(m)?;
            if modes[..k].contains(&m) {
                return Err(CvError::ModeCollision(m));
            }
        }
        check_modes(modes.len())?;
        let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let cov = DMatrix::from_fn(idx.len(), idx.len(), |i, j| self.cov[(idx[i], idx[j])]);
        let mean = DVector::from_fn(idx.len(), |i, _| self.mean[idx[i]]);
        Ok(Self { cov, mean })
    }

    /// Product state `self ⊗ other`, with `other`'s modes appended.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let n = self.dim();
        let m = other.dim();
        check_modes((n + m) / 2)?;
        let mut cov = DMatrix::zeros(n + m, n + m);
        cov.view_mut((0, 0), (n, n)).copy_from(&self.cov);
        cov.view_mut((n, n), (m, m)).copy_from(&other.cov);
        let mean =
            DVector::from_iterator(n + m, self.mean.iter().chain(other.mean.iter()).copied());
        Ok(Self { cov, mean })
    }

    /// Characteristic function `exp(−½ u V uᵀ + i d·u)`, with `u` conjugate
    /// to `(q₁, p₁, …)`.
    pub fn char_fn(&self, u: &[f64]) -> Result<Complex64> {
        if u.len() != self.dim() {
            return Err(CvError::DimensionMismatch {
                expected: self.dim(),
                got: u.len(),
            });
        }
        let u = DVector::from_column_slice(u);
        let quad = u.dot(&(&self.cov * &u));
        let phase = self.mean.dot(&u);
        Ok(Complex64::from_polar((-0.5 * quad).exp(), phase))
    }

    /// Checks `V + iΩ ≥ −tol` and reports the smallest eigenvalue.
    pub fn validate_physical(&self) -> PhysicalityReport {
        let omega = symplectic_form(self.n_modes());
        let ev = hermitian_eigenvalues(&self.cov, &omega);
        let min_eigenvalue = ev.first().copied().unwrap_or(f64::NAN);
        PhysicalityReport {
            physical: min_eigenvalue >= -TOL_PHYS,
            min_eigenvalue,
        }
    }

    /// Reads `(n₁, n₂, c₁, c₂)` off a two-mode covariance in standard form.
    pub fn to_standard_form_params(&self) -> Result<StandardFormParams> {
        if self.n_modes() != 2 {
            return Err(CvError::FormMismatch(format!(
                "standard form needs two modes, state has {}",
                self.n_modes()
            )));
        }
        let v = &self.cov;
        let (n1, n2, c1, c2) = (v[(0, 0)], v[(1, 1)], v[(0, 2)], v[(1, 3)]);
        let zero_entries = [(0, 1), (0, 3), (1, 2), (2, 3)];
        for (i, j) in zero_entries {
            if v[(i, j)].abs() > TOL_FORM {
                return Err(CvError::FormMismatch(format!(
                    "V[{i}][{j}] = {:e} should vanish",
                    v[(i, j)]
                )));
            }
        }
        if (v[(2, 2)] - n1).abs() > TOL_FORM || (v[(3, 3)] - n2).abs() > TOL_FORM {
            return Err(CvError::FormMismatch(
                "local blocks L₁ and L₂ differ".into(),
            ));
        }
        Ok(StandardFormParams::new(n1, n2, c1, c2))
    }
}

/// Parameters `(n₁, n₂, c₁, c₂)` of a two-mode standard-form covariance,
/// together with the joint-quadrature variances `δᵢ = nᵢ − |cᵢ|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandardFormParams {
    pub n1: f64,
    pub n2: f64,
    pub c1: f64,
    pub c2: f64,
    pub delta1: f64,
    pub delta2: f64,
}

impl StandardFormParams {
    pub fn new(n1: f64, n2: f64, c1: f64, c2: f64) -> Self {
        Self {
            n1,
            n2,
            c1,
            c2,
            delta1: n1 - c1.abs(),
            delta2: n2 - c2.abs(),
        }
    }

    /// `(n₁ + |c₁|)(n₂ + |c₂|)`, the partner of `δ₁δ₂` in `det V`.
    pub fn anti_delta_product(&self) -> f64 {
        (self.n1 + self.c1.abs()) * (self.n2 + self.c2.abs())
    }

    pub fn delta_product(&self) -> f64 {
        self.delta1 * self.delta2
    }

    /// Physical iff both normal-mode products `(n₁ ± c₁)(n₂ ± c₂)` reach 1.
    pub fn is_physical(&self) -> bool {
        let plus = (self.n1 + self.c1) * (self.n2 + self.c2);
        let minus = (self.n1 - self.c1) * (self.n2 - self.c2);
        self.n1 > 0.0
            && self.n2 > 0.0
            && self.n1 > self.c1.abs()
            && self.n2 > self.c2.abs()
            && plus >= 1.0 - TOL_PHYS
            && minus >= 1.0 - TOL_PHYS
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vacuum_and_thermal() {
        let v = GaussianState::vacuum(1).unwrap();
        assert_eq!(v.cov(), &DMatrix::<f64>::identity(2, 2));
        assert_eq!(v.mean(), &DVector::<f64>::zeros(2));
        assert_eq!(
            GaussianState::vacuum(2).unwrap().cov(),
            &DMatrix::<f64>::identity(4, 4)
        );
        assert_eq!(GaussianState::thermal(&[1.0]).unwrap(), v);
        assert_eq!(
            GaussianState::thermal(&[3.0]).unwrap().cov(),
            &(DMatrix::<f64>::identity(2, 2) * 3.0)
        );
        assert!(matches!(
            GaussianState::vacuum(0),
            Err(CvError::UnsupportedModeCount(0))
        ));
        assert!(matches!(
            GaussianState::vacuum(4),
            Err(CvError::UnsupportedModeCount(4))
        ));
        assert!(matches!(
            GaussianState::thermal(&[0.5]),
            Err(CvError::Unphysical(_))
        ));
    }

    #[test]
    fn char_fn_values() {
        let vac = GaussianState::vacuum(1).unwrap();
        assert_abs_diff_eq!(vac.char_fn(&[0.0, 0.0]).unwrap().re, 1.0);
        assert_abs_diff_eq!(
            vac.char_fn(&[2.0, 0.0]).unwrap().re,
            (-2.0f64).exp(),
            epsilon = 1e-15
        );
        let th = GaussianState::thermal(&[3.0]).unwrap();
        assert_abs_diff_eq!(
            th.char_fn(&[1.0, 1.0]).unwrap().re,
            (-3.0f64).exp(),
            epsilon = 1e-15
        );
        assert!(matches!(
            vac.char_fn(&[1.0]),
            Err(CvError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn physicality() {
        let r = GaussianState::vacuum(2).unwrap().validate_physical();
        assert!(r.physical);
        assert_abs_diff_eq!(r.min_eigenvalue, 0.0, epsilon = 1e-12);
        let half = GaussianState::new(DMatrix::identity(2, 2) * 0.5, DVector::zeros(2)).unwrap();
        assert!(!half.validate_physical().physical);
        assert!(
            GaussianState::new_physical(DMatrix::identity(2, 2) * 0.5, DVector::zeros(2)).is_err()
        );
    }

    #[test]
    fn asymmetric_covariance_rejected() {
        let mut m = DMatrix::identity(2, 2);
        m[(0, 1)] = 1e-6;
        assert!(matches!(
            GaussianState::new(m, DVector::zeros(2)),
            Err(CvError::NotSymmetric(_))
        ));
    }

    #[test]
    fn standard_form_extraction() {
        let p = GaussianState::vacuum(2)
            .unwrap()
            .to_standard_form_params()
            .unwrap();
        assert_eq!(
            (p.n1, p.n2, p.c1, p.c2, p.delta1, p.delta2),
            (1.0, 1.0, 0.0, 0.0, 1.0, 1.0)
        );

        let mut cov = DMatrix::identity(4, 4);
        cov[(0, 1)] = 0.3;
        cov[(1, 0)] = 0.3;
        let s = GaussianState::new(cov, DVector::zeros(4)).unwrap();
        assert!(matches!(
            s.to_standard_form_params(),
            Err(CvError::FormMismatch(_))
        ));

        let unequal = GaussianState::thermal(&[1.0, 2.0]).unwrap();
        assert!(matches!(
            unequal.to_standard_form_params(),
            Err(CvError::FormMismatch(_))
        ));
        assert!(GaussianState::vacuum(1)
            .unwrap()
            .to_standard_form_params()
            .is_err());
    }

    #[test]
    fn standard_form_round_trip() {
        let params = StandardFormParams::new(2.1, 1.7, 1.3, -0.9);
        let s = GaussianState::from_standard_form(&params).unwrap();
        let back = s.to_standard_form_params().unwrap();
        assert_abs_diff_eq!(back.n1, params.n1, epsilon = 1e-12);
        assert_abs_diff_eq!(back.c2, params.c2, epsilon = 1e-12);
        assert_abs_diff_eq!(back.delta1, 0.8, epsilon = 1e-12);
    }

    #[test]
    fn marginal_and_tensor() {
        let s = GaussianState::thermal(&[1.0, 2.0, 3.0]).unwrap();
        let m = s.marginal(&[2, 0]).unwrap();
        assert_eq!(m.cov()[(0, 0)], 3.0);
        assert_eq!(m.cov()[(2, 2)], 1.0);
        let t = GaussianState::vacuum(1)
            .unwrap()
            .tensor(&GaussianState::thermal(&[2.0]).unwrap())
            .unwrap();
        assert_eq!(t.cov()[(3, 3)], 2.0);
        assert!(s.tensor(&GaussianState::vacuum(1).unwrap()).is_err());
    }
}
