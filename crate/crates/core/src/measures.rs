//! Fidelity, purity and mixedness of Gaussian states.
//!
//! Fidelity is computed along three independent routes that must agree for
//! Gaussian inputs: the closed-form overlap of characteristic functions, the
//! value `2πW(0)` of one output port after mixing the inputs on a 50:50 beam
//! splitter, and the homodyne expression in terms of the output port's
//! moments after a diagonalizing phase shift.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{CvError, Result};
use crate::gaussian::{GaussianState, StandardFormParams};
use crate::symplectic::SymplecticMap;
use crate::tolerances::TOL_PURE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelityRoute {
    ClosedForm,
    BeamSplitterW0,
    HomodyneExpression,
}

/// `Fidelity` when at least one input is pure; otherwise the number is the
/// plain overlap `Tr ρ₁ρ₂`, which is not a fidelity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverlapKind {
    Fidelity,
    Overlap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityResult {
    pub value: f64,
    pub route: FidelityRoute,
    pub kind: OverlapKind,
}

/// First and second moments of a single output mode, as a homodyne detector
/// would report them. `delta_q`, `delta_p` are standard deviations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomodyneMoments {
    pub mean_q: f64,
    pub mean_p: f64,
    pub delta_q: f64,
    pub delta_p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PurityResult {
    /// `P = Tr ρ² = 1/√det V`.
    pub purity: f64,
    /// `M = 1 − P`.
    pub mixedness: f64,
    /// `M_quad = P⁻² − 1 = det V − 1`.
    pub mixedness_quad: f64,
}

fn is_pure(state: &GaussianState) -> bool {
    (state.det() - 1.0).abs() <= TOL_PURE
}

fn single_mode_pair(s1: &GaussianState, s2: &GaussianState) -> Result<OverlapKind> {
    for s in [s1, s2] {
        if s.n_modes() != 1 {
            return Err(CvError::DimensionMismatch {
                expected: 2,
                got: s.dim(),
            });
        }
    }
    Ok(if is_pure(s1) || is_pure(s2) {
        OverlapKind::Fidelity
    } else {
        OverlapKind::Overlap
    })
}

fn mat2(state: &GaussianState) -> Matrix2<f64> {
    let v = state.cov();
    Matrix2::new(v[(0, 0)], v[(0, 1)], v[(1, 0)], v[(1, 1)])
}

/// `2/√det(V₁+V₂) · exp(−½ Δd (V₁+V₂)⁻¹ Δdᵀ)`.
pub fn fidelity_closed_form(s1: &GaussianState, s2: &GaussianState) -> Result<FidelityResult> {
    let kind = single_mode_pair(s1, s2)?;
    let sum = mat2(s1) + mat2(s2);
    let det = sum.determinant();
    let inv = sum
        .try_inverse()
        .filter(|_| det > 0.0)
        .ok_or(CvError::Singular("V₁ + V₂"))?;
    let dd = nalgebra::Vector2::new(s1.mean()[0] - s2.mean()[0], s1.mean()[1] - s2.mean()[1]);
    let value = 2.0 / det.sqrt() * (-0.5 * dd.dot(&(inv * dd))).exp();
    Ok(FidelityResult {
        value,
        route: FidelityRoute::ClosedForm,
        kind,
    })
}

/// Wigner function of a single-mode Gaussian at the phase-space origin,
/// normalized so that `∫ W dq dp = 1`.
pub fn wigner_at_origin(state: &GaussianState) -> Result<f64> {
    if state.n_modes() != 1 {
        return Err(CvError::DimensionMismatch {
            expected: 2,
            got: state.dim(),
        });
    }
    let v = mat2(state);
    let det = v.determinant();
    let inv = v
        .try_inverse()
        .filter(|_| det > 0.0)
        .ok_or(CvError::Singular("output covariance"))?;
    let d = nalgebra::Vector2::new(state.mean()[0], state.mean()[1]);
    Ok((-0.5 * d.dot(&(inv * d))).exp() / (2.0 * PI * det.sqrt()))
}

/// Mixes `s1` (mode 0) and `s2` (mode 1) on a 50:50 beam splitter with
/// `r = −t = 1/√2` and returns the output state; mode 0 carries
/// `V = (V₁+V₂)/2`, `d = (d₂−d₁)/√2`.
pub fn beam_splitter_output(s1: &GaussianState, s2: &GaussianState) -> Result<GaussianState> {
    single_mode_pair(s1, s2)?;
    let bs = SymplecticMap::beam_split(2, 0, 1, 3.0 * PI / 4.0)?;
    bs.apply(&s1.tensor(s2)?)
}

pub fn fidelity_via_bs(s1: &GaussianState, s2: &GaussianState) -> Result<FidelityResult> {
    let kind = single_mode_pair(s1, s2)?;
    let port = beam_splitter_output(s1, s2)?.marginal(&[0])?;
    Ok(FidelityResult {
        value: 2.0 * PI * wigner_at_origin(&port)?,
        route: FidelityRoute::BeamSplitterW0,
        kind,
    })
}

/// Phase-shifts a single-mode state so its covariance becomes diagonal and
/// reads off the homodyne moments `⟨q⟩, ⟨p⟩, Δq, Δp`.
pub fn diagonalized_moments(state: &GaussianState) -> Result<HomodyneMoments> {
    if state.n_modes() != 1 {
        return Err(CvError::DimensionMismatch {
            expected: 2,
            got: state.dim(),
        });
    }
    let v = state.cov();
    let phi = 0.5 * f64::atan2(-2.0 * v[(0, 1)], v[(0, 0)] - v[(1, 1)]);
    let rotated = SymplecticMap::rotate(1, 0, phi)?.apply(state)?;
    let (vq, vp) = (rotated.cov()[(0, 0)], rotated.cov()[(1, 1)]);
    if !(vq > 0.0 && vp > 0.0) {
        return Err(CvError::Unphysical("non-positive output variance".into()));
    }
    Ok(HomodyneMoments {
        mean_q: rotated.mean()[0],
        mean_p: rotated.mean()[1],
        delta_q: vq.sqrt(),
        delta_p: vp.sqrt(),
    })
}

/// `(1/ΔqΔp) · exp[−½(⟨q⟩²/Δq² + ⟨p⟩²/Δp²)]` for moments measured on the
/// diagonalized beam-splitter output.
pub fn fidelity_homodyne_expression(m: &HomodyneMoments) -> Result<FidelityResult> {
    if !(m.delta_q > 0.0 && m.delta_p > 0.0) {
        return Err(CvError::ParameterOutOfRange {
            name: "delta_q * delta_p",
            value: m.delta_q * m.delta_p,
            range: "Δq > 0 and Δp > 0",
        });
    }
    let expo = -0.5 * (m.mean_q.powi(2) / m.delta_q.powi(2) + m.mean_p.powi(2) / m.delta_p.powi(2));
    Ok(FidelityResult {
        value: expo.exp() / (m.delta_q * m.delta_p),
        route: FidelityRoute::HomodyneExpression,
        kind: OverlapKind::Fidelity,
    })
}

/// Full homodyne route: beam splitter, diagonalizing phase shift, moments,
/// then [`fidelity_homodyne_expression`].
pub fn fidelity_via_homodyne(s1: &GaussianState, s2: &GaussianState) -> Result<FidelityResult> {
    let kind = single_mode_pair(s1, s2)?;
    let port = beam_splitter_output(s1, s2)?.marginal(&[0])?;
    let mut res = fidelity_homodyne_expression(&diagonalized_moments(&port)?)?;
    res.kind = kind;
    Ok(res)
}

pub fn purity(state: &GaussianState) -> Result<PurityResult> {
    let det = state.det();
    if !(det > 0.0) {
        return Err(CvError::Unphysical(format!(
            "det V = {det:e} is not positive"
        )));
    }
    let purity = 1.0 / det.sqrt();
    Ok(PurityResult {
        purity,
        mixedness: 1.0 - purity,
        mixedness_quad: det - 1.0,
    })
}

/// Evaluation of the mixedness separability condition
/// `M₁₂ − M₁ − M₂ ≥ 2|c₁c₂|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixednessVerdict {
    /// Verdict using `M_quad = P⁻² − 1`; equivalent to `δ₁δ₂ ≥ 1`.
    pub separable: bool,
    /// Verdict using the linear mixedness `M = 1 − P`. Kept for comparison;
    /// it misclassifies e.g. the two-mode thermal product state.
    pub separable_linear: bool,
    pub m12_quad: f64,
    pub m1_quad: f64,
    pub m2_quad: f64,
    pub m12_linear: f64,
    pub m1_linear: f64,
    pub m2_linear: f64,
    /// `2|c₁c₂|`.
    pub threshold: f64,
}

pub fn mixedness_separability(params: &StandardFormParams) -> Result<MixednessVerdict> {
    if !params.is_physical() {
        return Err(CvError::Unphysical(format!(
            "standard-form parameters {params:?} violate the uncertainty principle"
        )));
    }
    let StandardFormParams { n1, n2, c1, c2, .. } = *params;
    let det12 = (n1 * n1 - c1 * c1) * (n2 * n2 - c2 * c2);
    // L₁ = L₂ = diag(n₁, n₂)
    let det_local = n1 * n2;
    let threshold = 2.0 * (c1 * c2).abs();

    let (m12_quad, m1_quad) = (det12 - 1.0, det_local - 1.0);
    let (m12_linear, m1_linear) = (1.0 - 1.0 / det12.sqrt(), 1.0 - 1.0 / det_local.sqrt());
    Ok(MixednessVerdict {
        separable: m12_quad - 2.0 * m1_quad >= threshold,
        separable_linear: m12_linear - 2.0 * m1_linear >= threshold,
        m12_quad,
        m1_quad,
        m2_quad: m1_quad,
        m12_linear,
        m1_linear,
        m2_linear: m1_linear,
        threshold,
    })
}
