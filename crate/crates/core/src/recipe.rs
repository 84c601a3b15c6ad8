//! State recipes: a preparation step (vacuum or thermal) followed by a
//! sequence of Gaussian operations. The same recipe builds a covariance-level
//! [`GaussianState`] and, through [`crate::fock`], a truncated Fock-space
//! density matrix.

use serde::{Deserialize, Serialize};

use crate::error::{CvError, Result};
use crate::gaussian::GaussianState;
use crate::symplectic::{displace, SymplecticMap};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Step {
    Vacuum { modes: usize },
    Thermal { occupations: Vec<f64> },
    Squeeze { mode: usize, s: f64 },
    Rotate { mode: usize, phi: f64 },
    TwoModeSqueeze { modes: [usize; 2], s: f64 },
    BeamSplit { modes: [usize; 2], theta: f64 },
    Displace { mode: usize, dq: f64, dp: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Recipe {
    pub steps: Vec<Step>,
}

impl Recipe {
    pub fn new(steps: Vec<Step>) -> Self {
        Self { steps }
    }

    pub fn vacuum(modes: usize) -> Self {
        Self::new(vec![Step::Vacuum { modes }])
    }

    pub fn thermal(occupations: &[f64]) -> Self {
        Self::new(vec![Step::Thermal {
            occupations: occupations.to_vec(),
        }])
    }

    pub fn tmsv(s: f64) -> Self {
        Self::vacuum(2).then(Step::TwoModeSqueeze { modes: [0, 1], s })
    }

    pub fn then(mut self, step: Step) -> Self {
        self.steps.push(step);
        self
    }

    /// Splits off the preparation step; errors if the recipe does not start
    /// with one or uses it later on.
    pub fn split(&self) -> Result<(&Step, &[Step])> {
        let (first, rest) = self
            .steps
            .split_first()
            .ok_or_else(|| CvError::Recipe("empty recipe".into()))?;
        if !matches!(first, Step::Vacuum { .. } | Step::Thermal { .. }) {
            return Err(CvError::Recipe(
                "the first step must be `vacuum` or `thermal`".into(),
            ));
        }
        if rest
            .iter()
            .any(|s| matches!(s, Step::Vacuum { .. } | Step::Thermal { .. }))
        {
            return Err(CvError::Recipe(
                "`vacuum`/`thermal` may only appear as the first step".into(),
            ));
        }
        Ok((first, rest))
    }

    pub fn n_modes(&self) -> Result<usize> {
        let (first, _) = self.split()?;
        Ok(match first {
            Step::Vacuum { modes } => *modes,
            Step::Thermal { occupations } => occupations.len(),
            _ => unreachable!("checked by split"),
        })
    }

    pub fn build(&self) -> Result<GaussianState> {
        let (first, rest) = self.split()?;
        let mut state = match first {
            Step::Vacuum { modes } => GaussianState::vacuum(*modes)?,
            Step::Thermal { occupations } => GaussianState::thermal(occupations)?,
            _ => unreachable!("checked by split"),
        };
        let n = state.n_modes();
        for step in rest {
            state = match *step {
                Step::Squeeze { mode, s } => SymplecticMap::squeeze(n, mode, s)?.apply(&state)?,
                Step::Rotate { mode, phi } => SymplecticMap::rotate(n, mode, phi)?.apply(&state)?,
                Step::TwoModeSqueeze { modes: [a, b], s } => {
                    SymplecticMap::two_mode_squeeze(n, a, b, s)?.apply(&state)?
                }
                Step::BeamSplit {
                    modes: [a, b],
                    theta,
                } => SymplecticMap::beam_split(n, a, b, theta)?.apply(&state)?,
                Step::Displace { mode, dq, dp } => displace(&state, mode, dq, dp)?,
                Step::Vacuum { .. } | Step::Thermal { .. } => unreachable!("checked by split"),
            };
        }
        Ok(state)
    }
}
