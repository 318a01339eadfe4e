use std::hint::black_box;

use coop_emission::oracle::{oracle_spectrum_point, QuadratureSpec};
use coop_emission::{
    decay_vs_distance, spectrum_point, spectrum_sweep, tau_with_derivs, units, AtomSpec, BellState, FrequencyGrid,
    MirrorSpec, SystemConfig, Vec3,
};
use criterion::{criterion_group, criterion_main, Criterion};

fn fig2() -> SystemConfig {
    let mu = [1e-30, 0.0, 0.0];
    SystemConfig {
        atom_a: AtomSpec::from_si([0.0, 0.0, 1e-6], mu),
        atom_b: AtomSpec::from_si([0.0, 0.0, 1.1e-6], mu),
        mirror: MirrorSpec::oscillating(2e-7, 1.5e9),
        omega0: 1e15,
        bell_state: BellState::Symmetric,
        dicke_limit: false,
    }
}

fn tensor(c: &mut Criterion) {
    let k = units::wavenumber(1e15);
    let r = Vec3::new(0.2e-6, -0.1e-6, 2.1e-6);
    c.bench_function("tau_with_derivs", |b| b.iter(|| tau_with_derivs(black_box(k), black_box(&r))));
    let near = Vec3::new(0.0, 0.0, 1e-9);
    c.bench_function("tau_with_derivs_series", |b| b.iter(|| tau_with_derivs(black_box(k), black_box(&near))));
}

fn spectrum(c: &mut Criterion) {
    let cfg = fig2();
    let g = cfg.validate().unwrap().geometry;
    c.bench_function("spectrum_point", |b| {
        b.iter(|| spectrum_point(black_box(&cfg), &g, black_box(1e15 + 1.5e9), 1.6e-7))
    });
    let grid = FrequencyGrid::default_for(&cfg, 1.6e-7).unwrap();
    c.bench_function("spectrum_sweep_4001", |b| b.iter(|| spectrum_sweep(black_box(&cfg), &g, &grid, 1.6e-7)));
}

fn decay(c: &mut Criterion) {
    let cfg = fig2();
    let z_b: Vec<f64> = (0..400).map(|i| 1e-7 + 3.9e-6 * i as f64 / 399.0).collect();
    let times = [2e-7, 2.3e-7, 2.4e-7];
    c.bench_function("decay_vs_distance_400x3", |b| b.iter(|| decay_vs_distance(black_box(&cfg), &z_b, &times)));
}

fn oracle(c: &mut Criterion) {
    let cfg = fig2();
    let quad = QuadratureSpec::default();
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    group.bench_function("oracle_point_t5e-9", |b| {
        b.iter(|| oracle_spectrum_point(black_box(&cfg), 1e15 + 1.5e9, 5e-9, &quad))
    });
    group.finish();
}

criterion_group!(benches, tensor, spectrum, decay, oracle);
criterion_main!(benches);
