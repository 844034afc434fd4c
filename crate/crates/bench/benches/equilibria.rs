use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nashrand_core::families::example1_game;
use nashrand_core::{beta_game, bounded_ne_exists, support_enumeration, BigInt, EnumConfig};

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("support_enumeration");
    group.sample_size(10);
    let cfg = EnumConfig::default();
    for n in [6, 8, 10] {
        let g = beta_game(n).unwrap();
        group.bench_with_input(BenchmarkId::new("beta", n), &g, |b, g| {
            b.iter(|| support_enumeration(black_box(g), &cfg).unwrap())
        });
    }
    group.finish();
}

fn capability_gate(c: &mut Criterion) {
    let g = example1_game();
    let cfg = EnumConfig::default();
    let mut group = c.benchmark_group("bounded_ne_exists");
    group.sample_size(10);
    for (c1, c2) in [(2, 2), (33, 8), (34, 8)] {
        let (c1, c2) = (BigInt::from(c1), BigInt::from(c2));
        group.bench_function(format!("example1_{c1}_{c2}"), |b| {
            b.iter(|| bounded_ne_exists(black_box(&g), &c1, &c2, &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, enumeration, capability_gate);
criterion_main!(benches);
