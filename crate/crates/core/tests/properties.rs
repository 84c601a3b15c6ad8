use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cvgauss::entanglement::{
    negativity_lemma1, negativity_sympl, partial_transpose_v, separable_ppt, symplectic_spectrum,
    two_mode_spectrum_closed_form,
};
use cvgauss::generators::{random_standard_form, random_state, random_symplectic};
use cvgauss::measures::{fidelity_closed_form, purity};
use cvgauss::{apply_loss, displace, GaussianState, SymplecticMap};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rows_round_trip(seed in any::<u64>(), n in 1usize..=3) {
        let s = random_state(&mut rng(seed), n, false).unwrap();
        let back = GaussianState::from_rows(&s.cov_rows(), s.mean().as_slice()).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn char_fn_normalized_and_hermitian(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let s = random_state(&mut r, n, false).unwrap();
        let zero = vec![0.0; 2 * n];
        let c0 = s.char_fn(&zero).unwrap();
        prop_assert!((c0.re - 1.0).abs() < 1e-14 && c0.im.abs() < 1e-14);
        let u: Vec<f64> = (0..2 * n).map(|_| r.random_range(-1.0..1.0)).collect();
        let neg: Vec<f64> = u.iter().map(|x| -x).collect();
        let (a, b) = (s.char_fn(&u).unwrap(), s.char_fn(&neg).unwrap());
        prop_assert!((a - b.conj()).norm() < 1e-12);
    }

    #[test]
    fn symplectic_maps_keep_physicality_and_determinant(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let s = random_state(&mut r, n, false).unwrap();
        let m = random_symplectic(&mut r, n).unwrap();
        prop_assert!(m.symplecticity_error() < 1e-10);
        let out = m.apply(&s).unwrap();
        prop_assert!(out.validate_physical().physical);
        prop_assert!((out.det() / s.det() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn loss_keeps_physicality_and_contracts_toward_vacuum(seed in any::<u64>(), n in 1usize..=2) {
        let s = random_state(&mut rng(seed), n, false).unwrap();
        let margin = s.validate_physical().min_eigenvalue;
        let eig = |st: &GaussianState| {
            let mut e: Vec<f64> = st.cov().clone().symmetric_eigenvalues().iter().copied().collect();
            e.sort_by(f64::total_cmp);
            e
        };
        let mut previous = eig(&s);
        for k in (0..20).rev() {
            let eta = k as f64 / 19.0;
            let lossy = apply_loss(&s, eta).unwrap();
            let report = lossy.validate_physical();
            prop_assert!(report.physical);
            // V' + iΩ = η(V + iΩ) + (1 − η)(1 + iΩ) and 1 + iΩ ≥ 0
            prop_assert!(report.min_eigenvalue >= eta * margin - 1e-9);
            let current = eig(&lossy);
            for (c, p) in current.iter().zip(&previous) {
                prop_assert!((c - 1.0).abs() <= (p - 1.0).abs() + 1e-9);
            }
            previous = current;
        }
    }

    #[test]
    fn fidelity_symmetric_and_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_state(&mut r, 1, true).unwrap();
        let b = random_state(&mut r, 1, false).unwrap();
        let f = fidelity_closed_form(&a, &b).unwrap().value;
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f));
        prop_assert!((f - fidelity_closed_form(&b, &a).unwrap().value).abs() < 1e-12);
        let m = random_symplectic(&mut r, 1).unwrap();
        let g = fidelity_closed_form(&m.apply(&a).unwrap(), &m.apply(&b).unwrap()).unwrap().value;
        prop_assert!((f - g).abs() < 1e-9);
    }

    #[test]
    fn purity_in_unit_interval(seed in any::<u64>(), n in 1usize..=3, pure in any::<bool>()) {
        let s = random_state(&mut rng(seed), n, pure).unwrap();
        let p = purity(&s).unwrap().purity;
        prop_assert!(p > 0.0 && p <= 1.0 + 1e-9);
        if pure {
            prop_assert!((p - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn negativity_invariant_under_local_maps_and_displacement(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_state(&mut r, 2, false).unwrap();
        let local = SymplecticMap::local(&random_symplectic(&mut r, 1).unwrap(), &random_symplectic(&mut r, 1).unwrap()).unwrap();
        let moved = displace(&local.apply(&s).unwrap(), 1, 1.3, -0.4).unwrap();
        let (e0, e1) = (negativity_sympl(s.cov()).unwrap().value, negativity_sympl(moved.cov()).unwrap().value);
        prop_assert!((e0 - e1).abs() < 1e-7 * (1.0 + e0));
    }

    #[test]
    fn spectrum_routes_agree(seed in any::<u64>()) {
        let s = random_state(&mut rng(seed), 2, false).unwrap();
        let pt = partial_transpose_v(s.cov()).unwrap();
        let numeric = symplectic_spectrum(&pt).unwrap();
        let closed = two_mode_spectrum_closed_form(&pt).unwrap();
        for (a, b) in numeric.iter().zip(closed) {
            prop_assert!((a - b).abs() < 1e-7 * (1.0 + b));
        }
    }
}

#[test]
fn rotation_group_law() {
    let a = SymplecticMap::rotate(1, 0, 0.4).unwrap();
    let b = SymplecticMap::rotate(1, 0, 1.1).unwrap();
    let ab = SymplecticMap::rotate(1, 0, 1.5).unwrap();
    assert!((a.then(&b).unwrap().matrix() - ab.matrix()).amax() < 1e-12);
}

#[test]
fn standard_form_separability_equivalences() {
    let mut r = rng(11);
    for _ in 0..10_000 {
        let p = random_standard_form(&mut r);
        let s = GaussianState::from_standard_form(&p).unwrap();
        let ppt = separable_ppt(s.cov()).unwrap();
        let neg = negativity_sympl(s.cov()).unwrap();
        let min_nu = neg.nu_tilde.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(ppt, p.delta_product() >= 1.0, "{p:?}");
        assert_eq!(ppt, min_nu >= 1.0 - 1e-9, "{p:?}");
        assert_eq!(ppt, neg.value == 0.0, "{p:?}");
        // E_lemma1 = (1 + E_sympl)² − 1 on this family
        let lemma = negativity_lemma1(&p).unwrap();
        assert_abs_diff_eq!(
            lemma,
            (1.0 + neg.value).powi(2) - 1.0,
            epsilon = 1e-8 * (1.0 + lemma)
        );
    }
}
