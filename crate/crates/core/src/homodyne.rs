//! Monte-Carlo simulation of balanced homodyne measurements.
//!
//! A detector of efficiency `η` is modelled as ideal detection after the
//! loss map `V ↦ ηV + (1 − η)·1` (see [`apply_loss`]). The measured
//! observable at local-oscillator phase `χ` is `x_χ = q cos χ + p sin χ`.
//!
//! Every batch draws from a ChaCha20 stream keyed by `(seed, stream)`, so
//! results depend only on the inputs and never on scheduling.

use std::f64::consts::FRAC_PI_2;
use std::f64::consts::FRAC_PI_4;
use std::io::Write;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{CvError, Result};
use crate::gaussian::GaussianState;
use crate::symplectic::{apply_loss, SymplecticMap};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomodyneSettings {
    pub mode: usize,
    /// Local-oscillator phase `χ` in radians.
    pub phase: f64,
    /// Detection efficiency `η ∈ (0, 1]`.
    pub efficiency: f64,
}

impl HomodyneSettings {
    pub fn new(mode: usize, phase: f64, efficiency: f64) -> Result<Self> {
        let s = Self {
            mode,
            phase,
            efficiency,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn q(mode: usize, efficiency: f64) -> Result<Self> {
        Self::new(mode, 0.0, efficiency)
    }

    pub fn p(mode: usize, efficiency: f64) -> Result<Self> {
        Self::new(mode, FRAC_PI_2, efficiency)
    }

    fn validate(&self) -> Result<()> {
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(CvError::ParameterOutOfRange {
                name: "efficiency",
                value: self.efficiency,
                range: "(0, 1]",
            });
        }
        if !self.phase.is_finite() {
            return Err(CvError::ParameterOutOfRange {
                name: "phase",
                value: self.phase,
                range: "finite",
            });
        }
        Ok(())
    }

    /// Row `u` with `x_χ = u · (q₁, p₁, …)`.
    fn direction(&self, dim: usize) -> nalgebra::DVector<f64> {
        let mut u = nalgebra::DVector::zeros(dim);
        let (sin, cos) = self.phase.sin_cos();
        u[2 * self.mode] = cos;
        u[2 * self.mode + 1] = sin;
        u
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Outcomes {
    Single(Vec<f64>),
    Joint(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub settings: Vec<HomodyneSettings>,
    pub shots: usize,
    pub seed: u64,
    pub stream: u64,
    pub values: Outcomes,
}

impl SampleBatch {
    /// CSV dump with a header row: `shot_index,value` or
    /// `shot_index,value_a,value_b`.
    pub fn write_csv<W: Write>(&self, out: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        match &self.values {
            Outcomes::Single(v) => {
                w.write_record(["shot_index", "value"])?;
                for (i, x) in v.iter().enumerate() {
                    w.serialize((i, x))?;
                }
            }
            Outcomes::Joint(v) => {
                w.write_record(["shot_index", "value_a", "value_b"])?;
                for (i, [a, b]) in v.iter().enumerate() {
                    w.serialize((i, a, b))?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn single(&self) -> Option<&[f64]> {
        match &self.values {
            Outcomes::Single(v) => Some(v),
            Outcomes::Joint(_) => None,
        }
    }

    pub fn joint(&self) -> Option<&[[f64; 2]]> {
        match &self.values {
            Outcomes::Joint(v) => Some(v),
            Outcomes::Single(_) => None,
        }
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Single-quadrature homodyne samples (stream 0).
pub fn sample_homodyne(
    state: &GaussianState,
    settings: HomodyneSettings,
    shots: usize,
    seed: u64,
) -> Result<SampleBatch> {
    sample_homodyne_stream(state, settings, shots, seed, 0)
}

pub fn sample_homodyne_stream(
    state: &GaussianState,
    settings: HomodyneSettings,
    shots: usize,
    seed: u64,
    stream: u64,
) -> Result<SampleBatch> {
    if shots == 0 {
        return Err(CvError::ZeroShots);
    }
    settings.validate()?;
    state.check_mode(settings.mode)?;
    let degraded = apply_loss(state, settings.efficiency)?;
    let u = settings.direction(state.dim());
    let mean = u.dot(degraded.mean());
    let var = u.dot(&(degraded.cov() * &u));
    if !(var >= 0.0) {
        return Err(CvError::Unphysical(format!(
            "negative quadrature variance {var}"
        )));
    }
    let sd = var.sqrt();
    let mut rng = rng_for(seed, stream);
    let values = (0..shots)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            mean + sd * z
        })
        .collect();
    Ok(SampleBatch {
        settings: vec![settings],
        shots,
        seed,
        stream,
        values: Outcomes::Single(values),
    })
}

/// Paired outcomes of two homodyne detectors on distinct modes (stream 0).
pub fn sample_joint(
    state: &GaussianState,
    a: HomodyneSettings,
    b: HomodyneSettings,
    shots: usize,
    seed: u64,
) -> Result<SampleBatch> {
    sample_joint_stream(state, a, b, shots, seed, 0)
}

pub fn sample_joint_stream(
    state: &GaussianState,
    a: HomodyneSettings,
    b: HomodyneSettings,
    shots: usize,
    seed: u64,
    stream: u64,
) -> Result<SampleBatch> {
    if shots == 0 {
        return Err(CvError::ZeroShots);
    }
    a.validate()?;
    b.validate()?;
    state.check_mode(a.mode)?;
    state.check_mode(b.mode)?;
    if a.mode == b.mode {
        return Err(CvError::NonCommuting(a.mode));
    }
    if a.efficiency != b.efficiency {
        return Err(CvError::ParameterOutOfRange {
            name: "efficiency",
            value: b.efficiency,
            range: "equal for both detectors",
        });
    }
    let degraded = apply_loss(state, a.efficiency)?;
    let (ua, ub) = (a.direction(state.dim()), b.direction(state.dim()));
    let v = degraded.cov();
    let (ma, mb) = (ua.dot(degraded.mean()), ub.dot(degraded.mean()));
    let (vaa, vbb, vab) = (ua.dot(&(v * &ua)), ub.dot(&(v * &ub)), ua.dot(&(v * &ub)));
    // 2x2 Cholesky factor
    if !(vaa > 0.0) {
        return Err(CvError::Unphysical(
            "non-positive quadrature variance".into(),
        ));
    }
    let l11 = vaa.sqrt();
    let l21 = vab / l11;
    let l22 = (vbb - l21 * l21).max(0.0).sqrt();
    let mut rng = rng_for(seed, stream);
    let values = (0..shots)
        .map(|_| {
            let z1: f64 = StandardNormal.sample(&mut rng);
            let z2: f64 = StandardNormal.sample(&mut rng);
            [ma + l11 * z1, mb + l21 * z1 + l22 * z2]
        })
        .collect();
    Ok(SampleBatch {
        settings: vec![a, b],
        shots,
        seed,
        stream,
        values: Outcomes::Joint(values),
    })
}

/// Sample mean and variance of a single-quadrature batch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub mean: f64,
    pub mean_se: f64,
    pub variance: f64,
    /// `s²·√(2/n)`, from `Var(x²) = 2σ⁴` for Gaussian outcomes.
    pub variance_se: f64,
    pub shots: usize,
}

/// Sample covariance of a paired batch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossEstimate {
    pub mean_a: f64,
    pub mean_b: f64,
    pub var_a: f64,
    pub var_b: f64,
    pub covariance: f64,
    /// `√((s_aa s_bb + s_ab²)/n)`.
    pub covariance_se: f64,
    pub shots: usize,
}

pub fn estimate_moments(values: &[f64]) -> MomentEstimate {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let variance = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    MomentEstimate {
        mean,
        mean_se: (variance / n).sqrt(),
        variance,
        variance_se: variance * (2.0 / n).sqrt(),
        shots: values.len(),
    }
}

pub fn estimate_cross(pairs: &[[f64; 2]]) -> CrossEstimate {
    let n = pairs.len() as f64;
    let ma = pairs.iter().map(|p| p[0]).sum::<f64>() / n;
    let mb = pairs.iter().map(|p| p[1]).sum::<f64>() / n;
    let denom = (n - 1.0).max(1.0);
    let (mut saa, mut sbb, mut sab) = (0.0, 0.0, 0.0);
    for [a, b] in pairs {
        let (da, db) = (a - ma, b - mb);
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    let (saa, sbb, sab) = (saa / denom, sbb / denom, sab / denom);
    CrossEstimate {
        mean_a: ma,
        mean_b: mb,
        var_a: saa,
        var_b: sbb,
        covariance: sab,
        covariance_se: ((saa * sbb + sab * sab) / n).sqrt(),
        shots: pairs.len(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaEstimate {
    pub delta1: f64,
    pub delta1_se: f64,
    pub delta2: f64,
    pub delta2_se: f64,
    pub shots: usize,
}

/// `δ̂ = ½(s_aa + s_bb − 2|s_ab|)` with its delta-method standard error,
/// using Gaussian fourth moments for the covariance of `(s_aa, s_bb, s_ab)`.
fn joint_delta(est: &CrossEstimate) -> (f64, f64) {
    let (saa, sbb, sab) = (est.var_a, est.var_b, est.covariance);
    let n = est.shots as f64;
    let sign = if sab >= 0.0 { 1.0 } else { -1.0 };
    let delta = 0.5 * (saa + sbb - 2.0 * sab.abs());
    let g = [0.5, 0.5, -sign];
    // Cov(s_ij, s_kl) = (σ_ik σ_jl + σ_il σ_jk)/n over (aa, bb, ab)
    let sigma = |i: usize, j: usize| match (i, j) {
        (0, 0) => saa,
        (1, 1) => sbb,
        _ => sab,
    };
    let pairs = [(0, 0), (1, 1), (0, 1)];
    let mut var = 0.0;
    for (x, &(i, j)) in pairs.iter().enumerate() {
        for (y, &(k, l)) in pairs.iter().enumerate() {
            let c = (sigma(i, k) * sigma(j, l) + sigma(i, l) * sigma(j, k)) / n;
            var += g[x] * g[y] * c;
        }
    }
    (delta, var.max(0.0).sqrt())
}

/// Estimates `δ₁` and `δ₂` of a two-mode state from two joint batches
/// (`q₁q₂` on stream 0, `p₁p₂` on stream 1) taken at efficiency `eta`.
pub fn estimate_delta(
    state: &GaussianState,
    eta: f64,
    shots: usize,
    seed: u64,
) -> Result<DeltaEstimate> {
    if state.n_modes() != 2 {
        return Err(CvError::DimensionMismatch {
            expected: 4,
            got: state.dim(),
        });
    }
    let qq = sample_joint_stream(
        state,
        HomodyneSettings::q(0, eta)?,
        HomodyneSettings::q(1, eta)?,
        shots,
        seed,
        0,
    )?;
    let pp = sample_joint_stream(
        state,
        HomodyneSettings::p(0, eta)?,
        HomodyneSettings::p(1, eta)?,
        shots,
        seed,
        1,
    )?;
    let (delta1, delta1_se) = joint_delta(&estimate_cross(qq.joint().expect("joint batch")));
    let (delta2, delta2_se) = joint_delta(&estimate_cross(pp.joint().expect("joint batch")));
    Ok(DeltaEstimate {
        delta1,
        delta1_se,
        delta2,
        delta2_se,
        shots,
    })
}

/// Appends a vacuum ancilla and mixes it with `mode` on a 50:50 beam
/// splitter (`r = t = 1/√2`). The ancilla is the last mode of the result.
pub fn offdiagonal_scheme_state(state: &GaussianState, mode: usize) -> Result<GaussianState> {
    state.check_mode(mode)?;
    let extended = state.tensor(&GaussianState::vacuum(1)?)?;
    let ancilla = extended.n_modes() - 1;
    SymplecticMap::beam_split(extended.n_modes(), mode, ancilla, FRAC_PI_4)?.apply(&extended)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OffDiagonalEstimate {
    /// Estimate of the local element `⟨qp⟩` of `mode`, i.e. `−2⟨q₁′p₃⟩`.
    pub value: f64,
    pub se: f64,
    pub shots: usize,
}

/// Off-diagonal local covariance element of `mode` via the beam-splitter
/// scheme: `q` on the transmitted port, `p` on the ancilla port, and
/// `V₁₂ = −2⟨q₁′p₃⟩`.
pub fn measure_offdiagonal_local(
    state: &GaussianState,
    mode: usize,
    shots: usize,
    seed: u64,
) -> Result<OffDiagonalEstimate> {
    measure_offdiagonal_local_stream(state, mode, shots, seed, 0)
}

pub fn measure_offdiagonal_local_stream(
    state: &GaussianState,
    mode: usize,
    shots: usize,
    seed: u64,
    stream: u64,
) -> Result<OffDiagonalEstimate> {
    let scheme = offdiagonal_scheme_state(state, mode)?;
    let ancilla = scheme.n_modes() - 1;
    let batch = sample_joint_stream(
        &scheme,
        HomodyneSettings::q(mode, 1.0)?,
        HomodyneSettings::p(ancilla, 1.0)?,
        shots,
        seed,
        stream,
    )?;
    let est = estimate_cross(batch.joint().expect("joint batch"));
    Ok(OffDiagonalEstimate {
        value: -2.0 * est.covariance,
        se: 2.0 * est.covariance_se,
        shots,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarianceReconstruction {
    /// Estimate of the loss-degraded covariance `ηV + (1 − η)·1`.
    pub measured: DMatrix<f64>,
    pub measured_se: DMatrix<f64>,
    /// `(V̂ − (1 − η)·1)/η`, the estimate of the covariance before detection.
    pub inverted: DMatrix<f64>,
    pub inverted_se: DMatrix<f64>,
    pub efficiency: f64,
    pub shots_per_setting: usize,
}

/// Full two-mode covariance from ten measurement settings: `q`/`p`
/// variances of each mode, the two local off-diagonal elements via the
/// beam-splitter scheme, and the four cross correlations.
pub fn reconstruct_variance(
    state: &GaussianState,
    eta: f64,
    shots_per_setting: usize,
    seed: u64,
) -> Result<VarianceReconstruction> {
    if state.n_modes() != 2 {
        return Err(CvError::DimensionMismatch {
            expected: 4,
            got: state.dim(),
        });
    }
    HomodyneSettings::q(0, eta)?;
    let degraded = apply_loss(state, eta)?;
    let mut v = DMatrix::zeros(4, 4);
    let mut se = DMatrix::zeros(4, 4);
    let mut stream = 0u64;
    let mut next = || {
        stream += 1;
        stream - 1
    };

    for k in 0..4 {
        let settings = HomodyneSettings::new(k / 2, if k % 2 == 0 { 0.0 } else { FRAC_PI_2 }, 1.0)?;
        let batch = sample_homodyne_stream(&degraded, settings, shots_per_setting, seed, next())?;
        let est = estimate_moments(batch.single().expect("single batch"));
        v[(k, k)] = est.variance;
        se[(k, k)] = est.variance_se;
    }
    for mode in 0..2 {
        let est =
            measure_offdiagonal_local_stream(&degraded, mode, shots_per_setting, seed, next())?;
        let (i, j) = (2 * mode, 2 * mode + 1);
        v[(i, j)] = est.value;
        v[(j, i)] = est.value;
        se[(i, j)] = est.se;
        se[(j, i)] = est.se;
    }
    for (i, j) in [(0, 2), (1, 3), (0, 3), (1, 2)] {
        let a = HomodyneSettings::new(0, if i % 2 == 0 { 0.0 } else { FRAC_PI_2 }, 1.0)?;
        let b = HomodyneSettings::new(1, if j % 2 == 0 { 0.0 } else { FRAC_PI_2 }, 1.0)?;
        let batch = sample_joint_stream(&degraded, a, b, shots_per_setting, seed, next())?;
        let est = estimate_cross(batch.joint().expect("joint batch"));
        v[(i, j)] = est.covariance;
        v[(j, i)] = est.covariance;
        se[(i, j)] = est.covariance_se;
        se[(j, i)] = est.covariance_se;
    }
    let inverted = (&v - DMatrix::<f64>::identity(4, 4) * (1.0 - eta)) / eta;
    let inverted_se = &se / eta;
    Ok(VarianceReconstruction {
        measured: v,
        measured_se: se,
        inverted,
        inverted_se,
        efficiency: eta,
        shots_per_setting,
    })
}
