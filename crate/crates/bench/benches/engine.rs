use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qchar_bench::{data, fundamental};
use qchar_core::crystal::generate_crystal;
use qchar_core::laurent::site_weight;
use qchar_core::{decompose, restrict, Convention, DynkinKind, Engine, EngineConfig, Monomial, TPoly};

fn fundamentals(c: &mut Criterion) {
    let mut group = c.benchmark_group("fundamental");
    group.sample_size(10);
    for (kind, rank, node) in [(DynkinKind::E6, 6, 1), (DynkinKind::E6, 6, 4), (DynkinKind::E7, 7, 7), (DynkinKind::E8, 8, 1)] {
        let d = data(kind, rank);
        for threads in [1, 4] {
            let engine = Engine::new(&d, EngineConfig { threads, ..Default::default() }).unwrap();
            group.bench_with_input(
                BenchmarkId::new(format!("{}-node{node}", d.label()), threads),
                &node,
                |b, &n| b.iter(|| engine.compute(Monomial::y(n, 0)).unwrap().qchar.len()),
            );
        }
    }
    group.finish();
}

fn crystal(c: &mut Criterion) {
    let d = data(DynkinKind::E7, 7);
    c.bench_function("crystal/E7-node7", |b| {
        b.iter(|| generate_crystal(&d, &Monomial::y(7, 0), 1_000_000, Convention::Standard).unwrap().len())
    });
}

fn restriction(c: &mut Criterion) {
    let (d, q) = fundamental(DynkinKind::E8, 8, 7);
    c.bench_function("restrict+decompose/E8-node7", |b| {
        b.iter(|| decompose(&d, &restrict(&d, black_box(&q))).unwrap().len())
    });
}

fn polynomials(c: &mut Criterion) {
    let p: TPoly = "1 + 3t^2 + 5t^4 + t^6 - 2t^8".parse().unwrap();
    let q: TPoly = "t^-4 + 7 + t^10".parse().unwrap();
    c.bench_function("tpoly/mul", |b| b.iter(|| black_box(&p).mul_ref(black_box(&q))));
    c.bench_function("tpoly/site_weight", |b| b.iter(|| site_weight(black_box(12), black_box(5))));
}

criterion_group!(benches, fundamentals, crystal, restriction, polynomials);
criterion_main!(benches);
