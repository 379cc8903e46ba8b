use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use specflow_bench::{dense_path, dirac_path, fuglede_path};
use specflow_core::flow::SfMethod;
use specflow_core::{
    cayley, connect_to_ii, gamma, metric_report, spectral_flow, spectral_projection_contour, PartitionOptions,
};

fn methods(c: &mut Criterion) {
    let opts = PartitionOptions::default();
    let mut g = c.benchmark_group("sf");
    for (name, path) in [("dense8", dense_path(8, 201)), ("fuglede", fuglede_path(201)), ("dirac", dirac_path(2, 201))] {
        for m in SfMethod::ALL {
            g.bench_with_input(BenchmarkId::new(m.name(), name), &path, |b, p| {
                b.iter(|| spectral_flow(black_box(p), m, &opts, 20).unwrap())
            });
        }
    }
    g.finish();
}

fn dimension_scaling(c: &mut Criterion) {
    let opts = PartitionOptions::default();
    let mut g = c.benchmark_group("phillips_by_dim");
    for dim in [4, 16, 64] {
        let path = dense_path(dim, 101);
        g.bench_with_input(BenchmarkId::from_parameter(dim), &path, |b, p| {
            b.iter(|| spectral_flow(black_box(p), SfMethod::Phillips, &opts, 1).unwrap())
        });
    }
    g.finish();
}

fn metrics(c: &mut Criterion) {
    let path = dense_path(16, 2);
    let (a, b) = (path.start().clone(), path.end().clone());
    c.bench_function("gamma_dim16", |bch| bch.iter(|| gamma(black_box(&a), black_box(&b)).unwrap()));
    c.bench_function("metric_report_dim16", |bch| bch.iter(|| metric_report(black_box(&a), black_box(&b)).unwrap()));
}

fn transforms(c: &mut Criterion) {
    let t = dense_path(8, 2).start().as_hermitian().unwrap().clone();
    let u = cayley(&t);
    c.bench_function("connect_dim8_64_steps", |b| b.iter(|| connect_to_ii(black_box(&u), 64).unwrap()));
    c.bench_function("contour_dim8_128_nodes", |b| {
        b.iter(|| spectral_projection_contour(black_box(&t), -0.37, 0.91, 128))
    });
}

criterion_group!(benches, methods, dimension_scaling, metrics, transforms);
criterion_main!(benches);
