use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use netgompertz::{build_system, decompose, integrate_sis, net_gompertz_params, TimeGrid};
use netgompertz_bench::{paper_like_params, ring_lattice};

fn bench_decompose(c: &mut Criterion) {
    let mut group = c.benchmark_group("decompose");
    for n in [50, 100, 250] {
        let g = ring_lattice(n, 2);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| decompose(black_box(g)).unwrap())
        });
    }
    group.finish();
}

fn bench_sis(c: &mut Criterion) {
    let mut group = c.benchmark_group("integrate_sis");
    group.sample_size(20);
    let grid = TimeGrid::new(50.0, 0.01).unwrap();
    for n in [82, 250] {
        let g = ring_lattice(n, 1);
        let params = paper_like_params(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| integrate_sis(black_box(g), &params, grid).unwrap())
        });
    }
    group.finish();
}

fn bench_bound(c: &mut Criterion) {
    let mut group = c.benchmark_group("bound_probability");
    let times = TimeGrid::new(150.0, 0.1).unwrap().times();
    for n in [82, 250] {
        let g = ring_lattice(n, 1);
        let spectral = decompose(&g).unwrap();
        let params = paper_like_params(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &spectral, |b, s| {
            b.iter(|| build_system(s, &params).bound_probability(black_box(&times)).unwrap())
        });
    }
    group.finish();
}

fn bench_gompertz_params(c: &mut Criterion) {
    let g = ring_lattice(250, 2);
    let spectral = decompose(&g).unwrap();
    let params = paper_like_params(250);
    c.bench_function("net_gompertz_params/250", |b| {
        b.iter(|| net_gompertz_params(black_box(&spectral), &params).unwrap())
    });
}

criterion_group!(benches, bench_decompose, bench_sis, bench_bound, bench_gompertz_params);
criterion_main!(benches);
