use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use critbind_bench::exponential_fixture;
use critbind_core::radial::{bound_state_direct, critical_coupling_shoot};
use critbind_core::threshold::{separable_energy, WFunction};
use critbind_core::twod::{binding_energy_2d, epsilon_expansion};

fn solvers(c: &mut Criterion) {
    let (p, grid) = exponential_fixture();
    let eps = 1.0;
    let state = critical_coupling_shoot(&p, eps, &grid).unwrap();
    let w = WFunction::from_state(&p, &state);
    let lambda = 1.2 * state.lambda_c;

    c.bench_function("critical_coupling_shoot", |b| {
        b.iter(|| critical_coupling_shoot(black_box(&p), black_box(eps), &grid).unwrap())
    });
    c.bench_function("bound_state_direct", |b| {
        b.iter(|| bound_state_direct(&p, eps, black_box(lambda), &grid).unwrap())
    });
    c.bench_function("separable_energy", |b| {
        b.iter(|| separable_energy(&w, eps, black_box(1.001 * state.lambda_c)).unwrap())
    });
    let mut slow = c.benchmark_group("two_dimensional");
    slow.sample_size(10);
    slow.bench_function("epsilon_expansion", |b| b.iter(|| epsilon_expansion(black_box(&p)).unwrap()));
    slow.bench_function("binding_energy_2d", |b| {
        b.iter(|| binding_energy_2d(black_box(&p), black_box(0.2)).unwrap())
    });
    slow.finish();
}

criterion_group!(benches, solvers);
criterion_main!(benches);
