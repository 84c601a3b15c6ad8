//! Side-by-side comparison of closed-form quantities with the Fock oracle.

use cvgauss::entanglement::negativity_sympl;
use cvgauss::fock::{
    oracle_build, oracle_build_auto, oracle_fidelity, oracle_negativity, oracle_variance,
    FockDensity,
};
use cvgauss::measures::{fidelity_closed_form, purity};
use cvgauss::{CvError, GaussianState, Recipe};
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Validated};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub quantity: String,
    pub closed_form: f64,
    pub oracle: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleBlock {
    pub cutoff: Option<usize>,
    pub tail_mass: Option<f64>,
    pub rows: Vec<OracleRow>,
    /// Set when the recipe could not be represented within the cutoff
    /// limits; the rows are then incomplete.
    pub warning: Option<String>,
}

fn row(quantity: impl Into<String>, closed_form: f64, oracle: f64) -> OracleRow {
    OracleRow {
        quantity: quantity.into(),
        closed_form,
        oracle,
        abs_diff: (closed_form - oracle).abs(),
    }
}

fn is_representability(err: &CvError) -> bool {
    matches!(
        err,
        CvError::CutoffTooSmall { .. }
            | CvError::CutoffLimit { .. }
            | CvError::UnsupportedModeCount(_)
    )
}

fn warning_block(err: CvError, cutoff: Option<usize>) -> OracleBlock {
    OracleBlock {
        cutoff,
        tail_mass: None,
        rows: Vec::new(),
        warning: Some(err.to_string()),
    }
}

pub fn oracle_check(config: &ExperimentConfig, validated: &Validated) -> CliResult<OracleBlock> {
    let state = validated.require_state()?;
    let recipe = config
        .state
        .as_ref()
        .ok_or_else(|| CliError::Config("this command needs a `state` recipe".into()))?;
    let rho = match oracle_build_auto(recipe) {
        Ok(rho) => rho,
        Err(e) if is_representability(&e) => return Ok(warning_block(e, None)),
        Err(e) => return Err(e.into()),
    };
    let mut block = OracleBlock {
        cutoff: Some(rho.cutoff()),
        tail_mass: Some(rho.tail_mass()),
        rows: compare(state, &rho)?,
        warning: None,
    };
    if let (Some(ref_recipe), Some(reference)) = (&config.reference, &validated.reference) {
        if let Err(e) = compare_fidelity(state, reference, ref_recipe, &rho, &mut block.rows) {
            if is_representability(&e) {
                block.warning = Some(format!("reference state: {e}"));
            } else {
                return Err(e.into());
            }
        }
    }
    Ok(block)
}

fn compare(state: &GaussianState, rho: &FockDensity) -> Result<Vec<OracleRow>, CvError> {
    let mut rows = vec![row("purity", purity(state)?.purity, rho.purity()?)];
    let moments = oracle_variance(rho)?;
    let dim = state.dim();
    for i in 0..dim {
        for j in i..dim {
            rows.push(row(
                format!("V[{i}][{j}]"),
                state.cov()[(i, j)],
                moments.cov[(i, j)],
            ));
        }
    }
    for i in 0..dim {
        rows.push(row(format!("d[{i}]"), state.mean()[i], moments.mean[i]));
    }
    if state.n_modes() == 2 {
        rows.push(row(
            "e_sympl",
            negativity_sympl(state.cov())?.value,
            oracle_negativity(rho)?,
        ));
    }
    Ok(rows)
}

fn compare_fidelity(
    state: &GaussianState,
    reference: &GaussianState,
    ref_recipe: &Recipe,
    rho: &FockDensity,
    rows: &mut Vec<OracleRow>,
) -> Result<(), CvError> {
    if state.n_modes() != 1 || reference.n_modes() != 1 {
        return Ok(());
    }
    let ref_rho = oracle_build(ref_recipe, rho.cutoff())?;
    let (oracle, _) = oracle_fidelity(rho, &ref_rho)?;
    rows.push(row(
        "fidelity",
        fidelity_closed_form(state, reference)?.value,
        oracle,
    ));
    Ok(())
}
