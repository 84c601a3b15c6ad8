//! Random Gaussian states and symplectic maps for property tests, plus a
//! fixed corpus of recipes that the Fock oracle can represent.

use rand::Rng;

use crate::error::Result;
use crate::gaussian::{GaussianState, StandardFormParams};
use crate::recipe::{Recipe, Step};
use crate::symplectic::{apply_loss, displace, SymplecticMap};

/// Standard-form family `thermal(ν, ν) → squeeze both modes by r → TMS(s)`.
/// The covariance has local blocks `ν·diag(e^{−2r}, e^{2r})` mixed by the
/// two-mode squeezer, so it stays in standard form with `c₁ > 0 > c₂`.
pub fn standard_form_recipe(nu: f64, r: f64, s: f64) -> Recipe {
    Recipe::thermal(&[nu, nu])
        .then(Step::Squeeze { mode: 0, s: r })
        .then(Step::Squeeze { mode: 1, s: r })
        .then(Step::TwoModeSqueeze { modes: [0, 1], s })
}

/// Random physical standard-form parameters. Draws `ν ∈ [1, 4]`,
/// `r ∈ [−0.7, 0.7]`, `s ∈ [0, 1]` for [`standard_form_recipe`], then a loss
/// `η ∈ [0.3, 1]`, and with probability ½ flips the sign of `c₂` when the
/// mirrored state is still physical.
pub fn random_standard_form<R: Rng + ?Sized>(rng: &mut R) -> StandardFormParams {
    loop {
        let nu = rng.random_range(1.0..=4.0);
        let r = rng.random_range(-0.7..=0.7);
        let s = rng.random_range(0.0..=1.0);
        let eta = rng.random_range(0.3..=1.0);
        let state = standard_form_recipe(nu, r, s)
            .build()
            .and_then(|st| apply_loss(&st, eta))
            .expect("recipe parameters are in range");
        let mut params = state
            .to_standard_form_params()
            .expect("family keeps the standard form");
        if rng.random_bool(0.5) {
            let mirrored = StandardFormParams::new(params.n1, params.n2, params.c1, -params.c2);
            if mirrored.is_physical() {
                params = mirrored;
            }
        }
        if params.is_physical() {
            return params;
        }
    }
}

/// Random symplectic map on `n_modes` modes: a product of random
/// squeezers, rotations, beam splitters and two-mode squeezers.
pub fn random_symplectic<R: Rng + ?Sized>(rng: &mut R, n_modes: usize) -> Result<SymplecticMap> {
    let mut map = SymplecticMap::identity(n_modes)?;
    for _ in 0..(3 * n_modes) {
        let mode = rng.random_range(0..n_modes);
        let step = match rng.random_range(0..4) {
            0 => SymplecticMap::squeeze(n_modes, mode, rng.random_range(-1.0..=1.0))?,
            1 => {
                SymplecticMap::rotate(n_modes, mode, rng.random_range(0.0..std::f64::consts::TAU))?
            }
            k if n_modes > 1 => {
                let other = (mode + rng.random_range(1..n_modes)) % n_modes;
                if k == 2 {
                    SymplecticMap::beam_split(
                        n_modes,
                        mode,
                        other,
                        rng.random_range(0.0..std::f64::consts::PI),
                    )?
                } else {
                    SymplecticMap::two_mode_squeeze(
                        n_modes,
                        mode,
                        other,
                        rng.random_range(-0.8..=0.8),
                    )?
                }
            }
            _ => SymplecticMap::squeeze(n_modes, mode, rng.random_range(-1.0..=1.0))?,
        };
        map = map.then(&step)?;
    }
    Ok(map)
}

/// Random physical state: thermal occupations in `[1, 3]` (all 1 when
/// `pure`), a random symplectic map and a random displacement per mode.
pub fn random_state<R: Rng + ?Sized>(
    rng: &mut R,
    n_modes: usize,
    pure: bool,
) -> Result<GaussianState> {
    let occupations: Vec<f64> = (0..n_modes)
        .map(|_| {
            if pure {
                1.0
            } else {
                rng.random_range(1.0..=3.0)
            }
        })
        .collect();
    let mut state =
        random_symplectic(rng, n_modes)?.apply(&GaussianState::thermal(&occupations)?)?;
    for mode in 0..n_modes {
        state = displace(
            &state,
            mode,
            rng.random_range(-2.0..=2.0),
            rng.random_range(-2.0..=2.0),
        )?;
    }
    Ok(state)
}

/// Fixed set of one- and two-mode recipes whose Fock representation
/// converges within the cutoff limits.
pub fn recipe_corpus() -> Vec<(&'static str, Recipe)> {
    vec![
        ("vacuum", Recipe::vacuum(1)),
        ("thermal_1", Recipe::thermal(&[2.0])),
        ("thermal_3", Recipe::thermal(&[3.0])),
        (
            "squeezed",
            Recipe::vacuum(1).then(Step::Squeeze { mode: 0, s: 0.5 }),
        ),
        (
            "rotated_squeezed",
            Recipe::vacuum(1)
                .then(Step::Squeeze { mode: 0, s: 0.3 })
                .then(Step::Rotate {
                    mode: 0,
                    phi: std::f64::consts::FRAC_PI_4,
                }),
        ),
        (
            "coherent",
            Recipe::vacuum(1).then(Step::Displace {
                mode: 0,
                dq: 2.0,
                dp: 0.0,
            }),
        ),
        (
            "squeezed_thermal_displaced",
            Recipe::thermal(&[1.5])
                .then(Step::Squeeze { mode: 0, s: 0.4 })
                .then(Step::Rotate { mode: 0, phi: 0.3 })
                .then(Step::Displace {
                    mode: 0,
                    dq: 0.5,
                    dp: -0.7,
                }),
        ),
        ("tmsv_0.2", Recipe::tmsv(0.2)),
        ("tmsv_0.4", Recipe::tmsv(0.4)),
        ("tmsv_0.6", Recipe::tmsv(0.6)),
        ("thermal_product", Recipe::thermal(&[2.0, 1.5])),
        (
            "thermal_tms",
            Recipe::thermal(&[1.5, 2.0]).then(Step::TwoModeSqueeze {
                modes: [0, 1],
                s: 0.3,
            }),
        ),
        ("standard_form", standard_form_recipe(1.3, 0.2, 0.4)),
        (
            "split_squeezed",
            Recipe::vacuum(2)
                .then(Step::Squeeze { mode: 0, s: 0.4 })
                .then(Step::Squeeze { mode: 1, s: -0.4 })
                .then(Step::BeamSplit {
                    modes: [0, 1],
                    theta: std::f64::consts::FRAC_PI_4,
                }),
        ),
        (
            "mixed_two_mode",
            Recipe::thermal(&[1.2, 1.0])
                .then(Step::Squeeze { mode: 0, s: 0.3 })
                .then(Step::BeamSplit {
                    modes: [0, 1],
                    theta: 0.6,
                })
                .then(Step::TwoModeSqueeze {
                    modes: [0, 1],
                    s: 0.2,
                })
                .then(Step::Rotate { mode: 1, phi: 1.1 })
                .then(Step::Displace {
                    mode: 0,
                    dq: 0.4,
                    dp: 0.3,
                }),
        ),
    ]
}
