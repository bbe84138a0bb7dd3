use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lieforge_bench::{reductive_basis, reductive_set, unit_chain};
use lieforge_core::closure::{dense_closure, pauli_closure, ClosureOptions};
use lieforge_core::invariance::{build_sun_generators, SuNVariant};
use lieforge_core::models;
use lieforge_core::reduction::{build_filter, ideal_decomposition, oscillator_reduction, reduce};
use lieforge_core::trotter::{error_sweep, geometric_grid};

fn symbolic_closure(c: &mut Criterion) {
    let mut group = c.benchmark_group("pauli_closure");
    for n in [3u32, 4, 5] {
        let gens = build_sun_generators(n, SuNVariant::ZChain)
            .unwrap()
            .pauli_strings()
            .unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &gens, |b, g| {
            b.iter(|| pauli_closure(black_box(g)).unwrap())
        });
    }
    group.finish();
}

fn numeric_closure(c: &mut Criterion) {
    let ops = models::central_spin(1.0).p.dense_ops().unwrap();
    let opts = ClosureOptions::default();
    c.bench_function("dense_closure/central_spin", |b| {
        b.iter(|| dense_closure(black_box(&ops), &opts).unwrap())
    });
}

fn decomposition(c: &mut Criterion) {
    let basis = reductive_basis();
    let set = reductive_set();
    c.bench_function("ideal_decomposition/su2_su2_u1", |b| {
        b.iter(|| ideal_decomposition(black_box(&basis), 0).unwrap())
    });
    let dec = ideal_decomposition(&basis, 0).unwrap();
    let f = build_filter(&dec, &[0], 0).unwrap();
    c.bench_function("reduce/su2_su2_u1", |b| b.iter(|| reduce(black_box(&set), &f).unwrap()));
    c.bench_function("oscillator_reduction/d5", |b| {
        b.iter(|| oscillator_reduction(black_box(5), 2, 1, None).unwrap())
    });
}

fn trotter(c: &mut Criterion) {
    let ts = geometric_grid(0.02, 0.32, 5);
    let mut group = c.benchmark_group("error_sweep");
    group.sample_size(10);
    for n in [2u32, 3] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| error_sweep(&unit_chain(n), &[n], &[0.1], black_box(&ts)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, symbolic_closure, numeric_closure, decomposition, trotter);
criterion_main!(benches);
