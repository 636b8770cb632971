use bch_core::series::Pruning;
use bch_core::{expand, expand_naive, precompute_tables};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn expand_orders(c: &mut Criterion) {
    let tables = precompute_tables(16).unwrap();
    let mut group = c.benchmark_group("expand");
    group.sample_size(10);
    for order in [8, 10, 12, 14, 16] {
        group.bench_with_input(BenchmarkId::new("block", order), &order, |b, &order| {
            b.iter(|| expand(order, Pruning::default(), &tables).unwrap())
        });
    }
    for order in [8, 10, 12] {
        group.bench_with_input(BenchmarkId::new("naive", order), &order, |b, &order| {
            b.iter(|| expand_naive(order, Pruning::default()).unwrap())
        });
    }
    group.finish();
}

fn tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("precompute_tables");
    for order in [10, 20, 30] {
        group.bench_with_input(BenchmarkId::from_parameter(order), &order, |b, &order| {
            b.iter(|| precompute_tables(order).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, expand_orders, tables);
criterion_main!(benches);
