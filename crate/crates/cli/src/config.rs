//! TOML experiment configuration. Field names are published in
//! `schema/config.schema.json`; unknown keys are rejected.

use std::path::{Path, PathBuf};

use cvgauss::{GaussianState, Recipe};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    Fidelity,
    Purity,
    Mixedness,
    Entanglement,
    ReidDrummond,
    Region,
    CriticalEfficiency,
    Measurement,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Preparation step followed by Gaussian operations. Required by `run`
    /// and `oracle-check`; a sweep-only config may omit it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<Recipe>,
    /// Reference state for the fidelity analysis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<Recipe>,
    #[serde(default = "default_efficiency")]
    pub efficiency: f64,
    #[serde(default = "default_shots")]
    pub shots: usize,
    #[serde(default)]
    pub seed: u64,
    /// Analyses to run. When omitted: purity, plus entanglement for
    /// two-mode states.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analyses: Option<Vec<Analysis>>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Output directory; `--out` overrides it. Without either, results go
    /// to standard output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default = "default_report")]
    pub report: String,
    #[serde(default = "default_sweep")]
    pub sweep: String,
    #[serde(default = "default_oracle")]
    pub oracle: String,
    /// Raw homodyne samples as CSV, written when measurements run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<String>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: None,
            report: default_report(),
            sweep: default_sweep(),
            oracle: default_oracle(),
            samples: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.max
                } else {
                    self.min + k as f64 * step
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta1: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta2: Option<Axis>,
    /// Extra `(δ₁, δ₂)` cells appended after the grid.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<[f64; 2]>,
    /// Efficiencies for the per-cell detection columns.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub etas: Vec<f64>,
}

fn default_efficiency() -> f64 {
    1.0
}

fn default_shots() -> usize {
    100_000
}

fn default_report() -> String {
    "report.json".into()
}

fn default_sweep() -> String {
    "sweep.csv".into()
}

fn default_oracle() -> String {
    "oracle_check.json".into()
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig {
            path: path.to_owned(),
            source,
        })?;
        Self::from_toml(&text)
    }

    /// The configured analyses, or the defaults for an `n_modes` state.
    pub fn analyses_for(&self, n_modes: usize) -> Vec<Analysis> {
        match &self.analyses {
            Some(list) => list.clone(),
            None if n_modes == 2 => vec![Analysis::Purity, Analysis::Entanglement],
            None => vec![Analysis::Purity],
        }
    }

    /// Checks value ranges and analysis prerequisites, and builds the
    /// configured states. Unphysical states surface as
    /// [`CliError::Unphysical`].
    pub fn validate(&self) -> CliResult<Validated> {
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(CliError::Config(format!(
                "efficiency {} outside (0, 1]",
                self.efficiency
            )));
        }
        if self.shots < 2 {
            return Err(CliError::Config("shots must be at least 2".into()));
        }
        let state = match &self.state {
            Some(recipe) => Some(build_physical(recipe)?),
            None => None,
        };
        let reference = match &self.reference {
            Some(r) => Some(build_physical(r)?),
            None => None,
        };
        let analyses = match &state {
            Some(state) => {
                let analyses = self.analyses_for(state.n_modes());
                check_analyses(&analyses, state, reference.as_ref())?;
                analyses
            }
            None => Vec::new(),
        };
        if let Some(sweep) = &self.sweep {
            sweep.validate()?;
        }
        Ok(Validated {
            state,
            reference,
            analyses,
        })
    }
}

fn check_analyses(
    analyses: &[Analysis],
    state: &GaussianState,
    reference: Option<&GaussianState>,
) -> CliResult<()> {
    let wants = |a: Analysis| analyses.contains(&a);
    if wants(Analysis::Fidelity) {
        match reference {
            None => {
                return Err(CliError::Config(
                    "the fidelity analysis needs a `reference` recipe".into(),
                ))
            }
            Some(r) if r.n_modes() != 1 || state.n_modes() != 1 => {
                return Err(CliError::Config(
                    "fidelity is defined for single-mode states".into(),
                ))
            }
            Some(_) => {}
        }
    }
    let two_mode = [
        Analysis::Mixedness,
        Analysis::Entanglement,
        Analysis::ReidDrummond,
        Analysis::Region,
        Analysis::CriticalEfficiency,
    ];
    if let Some(a) = two_mode.iter().find(|a| wants(**a)) {
        if state.n_modes() != 2 {
            return Err(CliError::Config(format!(
                "analysis `{}` needs a two-mode state, got {} modes",
                analysis_name(*a),
                state.n_modes()
            )));
        }
    }
    if wants(Analysis::Measurement) && state.n_modes() > 2 {
        return Err(CliError::Config(
            "measurements support one or two modes".into(),
        ));
    }
    Ok(())
}

fn build_physical(recipe: &Recipe) -> CliResult<GaussianState> {
    let state = recipe.build().map_err(CliError::from_build)?;
    let report = state.validate_physical();
    if !report.physical {
        return Err(CliError::Unphysical(cvgauss::CvError::Unphysical(format!(
            "min eigenvalue of V + iΩ is {:e}",
            report.min_eigenvalue
        ))));
    }
    Ok(state)
}

pub fn analysis_name(a: Analysis) -> String {
    serde_json::to_value(a)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

impl SweepConfig {
    pub fn validate(&self) -> CliResult<()> {
        let in_range = |x: f64| x > 0.0 && x <= 4.0;
        match (&self.delta1, &self.delta2) {
            (Some(a), Some(b)) => {
                for (name, axis) in [("delta1", a), ("delta2", b)] {
                    if axis.steps == 0
                        || !in_range(axis.min)
                        || !in_range(axis.max)
                        || axis.min > axis.max
                    {
                        return Err(CliError::Config(format!(
                            "sweep axis {name} must satisfy 0 < min <= max <= 4 with steps >= 1"
                        )));
                    }
                }
            }
            (None, None) => {}
            _ => {
                return Err(CliError::Config(
                    "sweep needs both delta1 and delta2 axes".into(),
                ))
            }
        }
        if self.delta1.is_none() && self.points.is_empty() {
            return Err(CliError::Config(
                "sweep needs a grid or explicit points".into(),
            ));
        }
        if let Some(p) = self
            .points
            .iter()
            .find(|p| !in_range(p[0]) || !in_range(p[1]))
        {
            return Err(CliError::Config(format!(
                "sweep point {p:?} outside (0, 4]^2"
            )));
        }
        if let Some(eta) = self.etas.iter().find(|&&e| !(e > 0.0 && e <= 1.0)) {
            return Err(CliError::Config(format!(
                "sweep efficiency {eta} outside (0, 1]"
            )));
        }
        Ok(())
    }
}

/// States built from a validated configuration.
#[derive(Debug, Clone)]
pub struct Validated {
    pub state: Option<GaussianState>,
    pub reference: Option<GaussianState>,
    /// Analyses resolved against the built state.
    pub analyses: Vec<Analysis>,
}

impl Validated {
    pub fn wants(&self, analysis: Analysis) -> bool {
        self.analyses.contains(&analysis)
    }

    pub fn require_state(&self) -> CliResult<&GaussianState> {
        self.state
            .as_ref()
            .ok_or_else(|| CliError::Config("this command needs a `state` recipe".into()))
    }
}
