//! Two-mode entanglement: partial transpose, negativity, PPT separability,
//! the Reid–Drummond EPR test, and robustness against detector loss.
//!
//! The trace norm of the partially transposed density operator is obtained
//! from the symplectic spectrum `ν̃` of the momentum-reversed covariance:
//! `‖ρ^{T₂}‖₁ = Π_{ν̃ᵢ<1} 1/ν̃ᵢ`. The standard-form value
//! `(δ₁δ₂)⁻¹ − 1` is reported alongside as `e_lemma1`; for standard-form
//! states it equals `(1 + e_sympl)² − 1`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{CvError, Result};
use crate::gaussian::{GaussianState, StandardFormParams};
use crate::linalg::symplectic_eigenvalues;
use crate::tolerances::TOL_SEP;

/// Regions of the `(δ₁, δ₂)` plane: separable, entangled and detectable at
/// any non-zero efficiency, entangled but lost below a critical efficiency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    S,
    E,
    #[serde(rename = "E_prime")]
    EPrime,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::S => "S",
            Region::E => "E",
            Region::EPrime => "E_prime",
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglementReport {
    /// `max{0, (δ₁δ₂)⁻¹ − 1}`; present only for standard-form states.
    pub e_lemma1: Option<f64>,
    /// `‖ρ^{T₂}‖₁ − 1` from the partial-transpose symplectic spectrum.
    pub e_sympl: f64,
    pub separable: bool,
    /// Symplectic eigenvalues of the partially transposed covariance.
    pub nu_tilde: Vec<f64>,
    pub region: Option<Region>,
    pub eta_critical: Option<f64>,
    pub reid_drummond: Option<bool>,
}

/// Negativity from the symplectic route.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticNegativity {
    pub value: f64,
    pub nu_tilde: Vec<f64>,
}

fn check_two_mode(v: &DMatrix<f64>) -> Result<()> {
    if v.nrows() != 4 || v.ncols() != 4 {
        return Err(CvError::DimensionMismatch {
            expected: 4,
            got: v.nrows(),
        });
    }
    Ok(())
}

fn check_physical(v: &DMatrix<f64>) -> Result<()> {
    let state = GaussianState::new(v.clone(), nalgebra::DVector::zeros(v.nrows()))?;
    let report = state.validate_physical();
    if report.physical {
        Ok(())
    } else {
        Err(CvError::Unphysical(format!(
            "min eigenvalue of V + iΩ is {:e}",
            report.min_eigenvalue
        )))
    }
}

/// Momentum reversal on mode 2: `Ṽ = ΛVΛ`, `Λ = diag(1, 1, 1, −1)`.
pub fn partial_transpose_v(v: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_two_mode(v)?;
    let mut out = v.clone();
    for k in 0..4 {
        if k != 3 {
            out[(3, k)] = -out[(3, k)];
            out[(k, 3)] = -out[(k, 3)];
        }
    }
    Ok(out)
}

/// Symplectic eigenvalues of a positive-definite covariance, ascending.
pub fn symplectic_spectrum(v: &DMatrix<f64>) -> Result<Vec<f64>> {
    symplectic_eigenvalues(v)
}

/// Two-mode symplectic spectrum from the invariants `Δ = det L₁ + det L₂ +
/// 2 det C` and `det V`: `ν±² = [Δ ± √(Δ² − 4 det V)]/2`.
pub fn two_mode_spectrum_closed_form(v: &DMatrix<f64>) -> Result<[f64; 2]> {
    check_two_mode(v)?;
    let det2 = |i: usize, j: usize| v[(i, j)] * v[(i + 1, j + 1)] - v[(i, j + 1)] * v[(i + 1, j)];
    let delta = det2(0, 0) + det2(2, 2) + 2.0 * det2(0, 2);
    let det = v.determinant();
    let disc = (delta * delta - 4.0 * det).max(0.0).sqrt();
    let minus = (0.5 * (delta - disc)).max(0.0).sqrt();
    let plus = (0.5 * (delta + disc)).sqrt();
    Ok([minus, plus])
}

/// `max{0, (δ₁δ₂)⁻¹ − 1}` for a standard-form state.
pub fn negativity_lemma1(params: &StandardFormParams) -> Result<f64> {
    if !(params.delta1 > 0.0 && params.delta2 > 0.0) {
        return Err(CvError::Unphysical(format!(
            "joint-quadrature variances δ₁ = {}, δ₂ = {} must be positive",
            params.delta1, params.delta2
        )));
    }
    Ok((1.0 / params.delta_product() - 1.0).max(0.0))
}

/// `‖ρ^{T₂}‖₁ − 1` with the trace norm `Π_{ν̃<1} 1/ν̃` over the
/// partial-transpose symplectic spectrum. Works for any physical two-mode
/// covariance.
pub fn negativity_sympl(v: &DMatrix<f64>) -> Result<SymplecticNegativity> {
    check_two_mode(v)?;
    check_physical(v)?;
    let nu_tilde = symplectic_spectrum(&partial_transpose_v(v)?)?;
    let trace_norm: f64 = nu_tilde
        .iter()
        .filter(|&&nu| nu < 1.0 - TOL_SEP)
        .map(|nu| 1.0 / nu)
        .product();
    Ok(SymplecticNegativity {
        value: trace_norm - 1.0,
        nu_tilde,
    })
}

/// PPT test: separable iff every partial-transpose symplectic eigenvalue is
/// at least `1 − 1e-9`.
pub fn separable_ppt(v: &DMatrix<f64>) -> Result<bool> {
    check_two_mode(v)?;
    check_physical(v)?;
    let nu = symplectic_spectrum(&partial_transpose_v(v)?)?;
    Ok(nu.iter().all(|&x| x >= 1.0 - TOL_SEP))
}

/// Standard-form PPT test `δ₁δ₂ ≥ 1`; the boundary counts as separable.
pub fn separable_standard_form(params: &StandardFormParams) -> Result<bool> {
    if !params.is_physical() {
        return Err(CvError::Unphysical(format!("{params:?}")));
    }
    Ok(params.delta_product() >= 1.0 - TOL_SEP)
}

/// Reid–Drummond EPR inequality `δ₁δ₂ < n₁n₂ / ((n₁+|c₁|)(n₂+|c₂|))`.
pub fn reid_drummond(params: &StandardFormParams) -> bool {
    params.delta_product() < params.n1 * params.n2 / params.anti_delta_product()
}

pub fn region_for_deltas(delta1: f64, delta2: f64) -> Region {
    if delta1 * delta2 >= 1.0 {
        Region::S
    } else if delta1 + delta2 < 2.0 {
        Region::E
    } else {
        Region::EPrime
    }
}

pub fn classify_region(params: &StandardFormParams) -> Region {
    region_for_deltas(params.delta1, params.delta2)
}

/// `δ'₁δ'₂` seen by detectors of efficiency `η`, with `δ' = ηδ + 1 − η`.
pub fn degraded_delta_product(delta1: f64, delta2: f64, eta: f64) -> f64 {
    (eta * delta1 + 1.0 - eta) * (eta * delta2 + 1.0 - eta)
}

/// Smallest efficiency above which the loss-degraded test `δ'₁δ'₂ < 1` still
/// reports entanglement: 0 in region E, `(2−δ₁−δ₂)/((1−δ₁)(1−δ₂))` in E′.
pub fn critical_efficiency_for_deltas(delta1: f64, delta2: f64) -> Result<f64> {
    match region_for_deltas(delta1, delta2) {
        Region::S => Err(CvError::NotEntangled("critical efficiency")),
        Region::E => Ok(0.0),
        Region::EPrime => {
            let eta = (2.0 - delta1 - delta2) / ((1.0 - delta1) * (1.0 - delta2));
            Ok(eta.clamp(0.0, 1.0))
        }
    }
}

pub fn critical_efficiency(params: &StandardFormParams) -> Result<f64> {
    critical_efficiency_for_deltas(params.delta1, params.delta2)
}

/// Runs every applicable analysis on a two-mode state. The standard-form
/// quantities are filled in only when the covariance matches that form.
pub fn analyze(state: &GaussianState) -> Result<EntanglementReport> {
    let v = state.cov();
    check_two_mode(v)?;
    let sympl = negativity_sympl(v)?;
    let separable = sympl.nu_tilde.iter().all(|&x| x >= 1.0 - TOL_SEP);
    let mut report = EntanglementReport {
        e_lemma1: None,
        e_sympl: sympl.value,
        separable,
        nu_tilde: sympl.nu_tilde,
        region: None,
        eta_critical: None,
        reid_drummond: None,
    };
    if let Ok(params) = state.to_standard_form_params() {
        report.e_lemma1 = Some(negativity_lemma1(&params)?);
        let region = classify_region(&params);
        report.region = Some(region);
        report.eta_critical = critical_efficiency(&params).ok();
        report.reid_drummond = Some(reid_drummond(&params));
    }
    Ok(report)
}

/// Smallest eigenvalue of `Ṽ + iΩ`; negative exactly when the partial
/// transpose is not a physical covariance.
pub fn partial_transpose_min_eigenvalue(v: &DMatrix<f64>) -> Result<f64> {
    let vt = partial_transpose_v(v)?;
    let state = GaussianState::new(vt, nalgebra::DVector::zeros(4))?;
    Ok(state.validate_physical().min_eigenvalue)
}
