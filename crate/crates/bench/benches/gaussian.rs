use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use cvgauss::entanglement::{analyze, negativity_sympl, symplectic_spectrum};
use cvgauss::measures::{fidelity_closed_form, fidelity_via_bs, fidelity_via_homodyne};
use cvgauss::{displace, GaussianState, Recipe, Step, SymplecticMap};

fn two_mode_state() -> GaussianState {
    Recipe::thermal(&[1.4, 1.2])
        .then(Step::Squeeze { mode: 0, s: 0.3 })
        .then(Step::BeamSplit {
            modes: [0, 1],
            theta: 0.5,
        })
        .then(Step::TwoModeSqueeze {
            modes: [0, 1],
            s: 0.6,
        })
        .build()
        .unwrap()
}

fn spectra(c: &mut Criterion) {
    let state = two_mode_state();
    c.bench_function("symplectic_spectrum_2mode", |b| {
        b.iter(|| symplectic_spectrum(black_box(state.cov())).unwrap())
    });
    c.bench_function("negativity_sympl", |b| {
        b.iter(|| negativity_sympl(black_box(state.cov())).unwrap())
    });
    c.bench_function("analyze", |b| {
        b.iter(|| analyze(black_box(&state)).unwrap())
    });
    c.bench_function("validate_physical_3mode", |b| {
        let s = SymplecticMap::beam_split(3, 0, 2, 0.4)
            .unwrap()
            .apply(&GaussianState::thermal(&[1.5, 2.0, 1.1]).unwrap())
            .unwrap();
        b.iter(|| black_box(&s).validate_physical())
    });
}

fn fidelity(c: &mut Criterion) {
    let a = SymplecticMap::squeeze(1, 0, 0.4)
        .unwrap()
        .apply(&GaussianState::vacuum(1).unwrap())
        .unwrap();
    let b = displace(&GaussianState::thermal(&[1.7]).unwrap(), 0, 0.5, -0.3).unwrap();
    let mut group = c.benchmark_group("fidelity");
    group.bench_function("closed_form", |bch| {
        bch.iter(|| fidelity_closed_form(black_box(&a), black_box(&b)).unwrap())
    });
    group.bench_function("beam_splitter", |bch| {
        bch.iter(|| fidelity_via_bs(black_box(&a), black_box(&b)).unwrap())
    });
    group.bench_function("homodyne_expression", |bch| {
        bch.iter(|| fidelity_via_homodyne(black_box(&a), black_box(&b)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, spectra, fidelity);
criterion_main!(benches);
