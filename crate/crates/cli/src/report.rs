//! The `run` pipeline and its JSON report.

use std::time::{SystemTime, UNIX_EPOCH};

use cvgauss::entanglement::{self, analyze};
use cvgauss::homodyne::{
    estimate_delta, estimate_moments, measure_offdiagonal_local, reconstruct_variance,
    sample_homodyne_stream, sample_joint_stream, DeltaEstimate, HomodyneSettings, MomentEstimate,
    OffDiagonalEstimate, SampleBatch,
};
use cvgauss::measures::{
    fidelity_closed_form, fidelity_via_bs, fidelity_via_homodyne, mixedness_separability, purity,
    MixednessVerdict,
};
use cvgauss::{
    apply_loss, EntanglementReport, GaussianState, OverlapKind, PurityResult, Region,
    StandardFormParams,
};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::config::{Analysis, ExperimentConfig, Validated};
use crate::error::CliResult;
use crate::oracle_check::{oracle_check, OracleBlock};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
    pub core_version: String,
}

impl ToolInfo {
    pub fn current() -> Self {
        Self {
            name: "cvgauss".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            core_version: cvgauss::VERSION.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSummary {
    pub n_modes: usize,
    pub covariance: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    /// Smallest eigenvalue of `V + iΩ`.
    pub min_eigenvalue: f64,
}

impl StateSummary {
    pub fn of(state: &GaussianState) -> Self {
        Self {
            n_modes: state.n_modes(),
            covariance: state.cov_rows(),
            mean: state.mean().iter().copied().collect(),
            min_eigenvalue: state.validate_physical().min_eigenvalue,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityBlock {
    pub value: f64,
    pub kind: OverlapKind,
    pub closed_form: f64,
    pub beam_splitter_w0: f64,
    pub homodyne_expression: f64,
}

/// Closed-form quantities of the configured (loss-free) state.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ExactQuantities {
    pub standard_form: Option<StandardFormParams>,
    pub purity: Option<PurityResult>,
    pub mixedness: Option<MixednessVerdict>,
    pub entanglement: Option<EntanglementReport>,
    pub reid_drummond: Option<bool>,
    pub region: Option<Region>,
    pub eta_critical: Option<f64>,
    pub fidelity: Option<FidelityBlock>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarEstimate {
    pub value: f64,
    pub se: f64,
    pub shots: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceEstimate {
    /// Estimate of the covariance seen by the detectors, `ηV + (1 − η)·1`.
    pub measured: Vec<Vec<f64>>,
    pub measured_se: Vec<Vec<f64>>,
    /// Loss-corrected estimate `(V̂ − (1 − η)·1)/η`.
    pub inverted: Vec<Vec<f64>>,
    pub inverted_se: Vec<Vec<f64>>,
    pub shots: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleModeEstimates {
    pub q: MomentEstimate,
    pub p: MomentEstimate,
    pub qp: OffDiagonalEstimate,
}

/// Simulated homodyne estimates at the configured efficiency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimates {
    pub efficiency: f64,
    pub shots: usize,
    pub delta: Option<DeltaEstimate>,
    pub delta_product: Option<ScalarEstimate>,
    /// Region of the measured `(δ̂₁, δ̂₂)`, i.e. of the state after loss.
    pub measured_region: Option<Region>,
    pub entangled_verdict: Option<bool>,
    pub covariance: Option<CovarianceEstimate>,
    pub single_mode: Option<SingleModeEstimates>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: ToolInfo,
    /// Seconds since the Unix epoch; not covered by the determinism contract.
    pub timestamp: u64,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub state: StateSummary,
    pub exact: ExactQuantities,
    pub estimated: Option<Estimates>,
    pub oracle: Option<OracleBlock>,
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

const LEMMA_NOTE: &str = "e_sympl is the trace-norm negativity of the partial transpose; \
e_lemma1 = 1/(delta1*delta2) - 1 equals (1 + e_sympl)^2 - 1 on standard-form states and is reported for comparison";

pub fn exact_quantities(
    validated: &Validated,
    state: &GaussianState,
) -> CliResult<ExactQuantities> {
    let reference = validated.reference.as_ref();
    let mut out = ExactQuantities::default();
    let params = if state.n_modes() == 2 {
        state.to_standard_form_params().ok()
    } else {
        None
    };
    out.standard_form = params;
    if validated.wants(Analysis::Purity) {
        out.purity = Some(purity(state)?);
    }
    if validated.wants(Analysis::Entanglement) {
        out.entanglement = Some(analyze(state)?);
        out.notes.push(LEMMA_NOTE.into());
    }
    let needs_form = [
        Analysis::Mixedness,
        Analysis::ReidDrummond,
        Analysis::Region,
        Analysis::CriticalEfficiency,
    ];
    if needs_form.iter().any(|a| validated.wants(*a)) && params.is_none() {
        out.notes
            .push("state is not in standard form; mixedness, Reid-Drummond, region and critical efficiency are omitted".into());
    }
    if let Some(p) = params {
        if validated.wants(Analysis::Mixedness) {
            out.mixedness = Some(mixedness_separability(&p)?);
        }
        if validated.wants(Analysis::ReidDrummond) {
            out.reid_drummond = Some(entanglement::reid_drummond(&p));
        }
        if validated.wants(Analysis::Region) {
            out.region = Some(entanglement::classify_region(&p));
        }
        if validated.wants(Analysis::CriticalEfficiency) {
            match entanglement::critical_efficiency(&p) {
                Ok(eta) => out.eta_critical = Some(eta),
                Err(e) => out.notes.push(format!("critical efficiency: {e}")),
            }
        }
    }
    if validated.wants(Analysis::Fidelity) {
        if let Some(r) = reference {
            let closed = fidelity_closed_form(state, r)?;
            out.fidelity = Some(FidelityBlock {
                value: closed.value,
                kind: closed.kind,
                closed_form: closed.value,
                beam_splitter_w0: fidelity_via_bs(state, r)?.value,
                homodyne_expression: fidelity_via_homodyne(state, r)?.value,
            });
        }
    }
    Ok(out)
}

/// Seed offset for the covariance reconstruction, keeping its streams
/// independent of the `δ` batches.
const RECONSTRUCTION_SEED_OFFSET: u64 = 1;

pub fn estimates(config: &ExperimentConfig, state: &GaussianState) -> CliResult<Estimates> {
    let (eta, shots, seed) = (config.efficiency, config.shots, config.seed);
    let mut out = Estimates {
        efficiency: eta,
        shots,
        delta: None,
        delta_product: None,
        measured_region: None,
        entangled_verdict: None,
        covariance: None,
        single_mode: None,
    };
    if state.n_modes() == 2 {
        let d = estimate_delta(state, eta, shots, seed)?;
        let product = d.delta1 * d.delta2;
        let se = ((d.delta2 * d.delta1_se).powi(2) + (d.delta1 * d.delta2_se).powi(2)).sqrt();
        out.delta_product = Some(ScalarEstimate {
            value: product,
            se,
            shots,
        });
        out.measured_region = Some(entanglement::region_for_deltas(d.delta1, d.delta2));
        out.entangled_verdict = Some(product < 1.0);
        out.delta = Some(d);
        let rec = reconstruct_variance(
            state,
            eta,
            shots,
            seed.wrapping_add(RECONSTRUCTION_SEED_OFFSET),
        )?;
        out.covariance = Some(CovarianceEstimate {
            measured: rows(&rec.measured),
            measured_se: rows(&rec.measured_se),
            inverted: rows(&rec.inverted),
            inverted_se: rows(&rec.inverted_se),
            shots: rec.shots_per_setting,
        });
    } else {
        let degraded = apply_loss(state, eta)?;
        let q = sample_homodyne_stream(state, HomodyneSettings::q(0, eta)?, shots, seed, 0)?;
        let p = sample_homodyne_stream(state, HomodyneSettings::p(0, eta)?, shots, seed, 1)?;
        out.single_mode = Some(SingleModeEstimates {
            q: estimate_moments(q.single().unwrap_or_default()),
            p: estimate_moments(p.single().unwrap_or_default()),
            qp: measure_offdiagonal_local(
                &degraded,
                0,
                shots,
                seed.wrapping_add(RECONSTRUCTION_SEED_OFFSET),
            )?,
        });
    }
    Ok(out)
}

/// The raw batch behind the first estimate: joint `q₁q₂` for two modes,
/// `q` for one.
pub fn sample_dump(config: &ExperimentConfig, state: &GaussianState) -> CliResult<SampleBatch> {
    let eta = config.efficiency;
    Ok(if state.n_modes() == 2 {
        sample_joint_stream(
            state,
            HomodyneSettings::q(0, eta)?,
            HomodyneSettings::q(1, eta)?,
            config.shots,
            config.seed,
            0,
        )?
    } else {
        sample_homodyne_stream(
            state,
            HomodyneSettings::q(0, eta)?,
            config.shots,
            config.seed,
            0,
        )?
    })
}

pub fn run(config: &ExperimentConfig, validated: &Validated) -> CliResult<ReportDocument> {
    let state = validated.require_state()?;
    let exact = exact_quantities(validated, state)?;
    let estimated = if validated.wants(Analysis::Measurement) {
        Some(estimates(config, state)?)
    } else {
        None
    };
    let oracle = if validated.wants(Analysis::Oracle) {
        Some(oracle_check(config, validated)?)
    } else {
        None
    };
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or_default();
    Ok(ReportDocument {
        tool: ToolInfo::current(),
        timestamp,
        seed: config.seed,
        config: config.clone(),
        state: StateSummary::of(state),
        exact,
        estimated,
        oracle,
    })
}
