use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nashrand_core::families::beta_matrix;
use nashrand_core::{cofactor_sum, cofactor_sum_by_solve, det, BigInt, IntMatrix};

fn determinants(c: &mut Criterion) {
    let mut group = c.benchmark_group("det");
    for n in [10, 40, 100, 200] {
        let m = beta_matrix(n);
        group.bench_with_input(BenchmarkId::new("beta", n), &m, |b, m| b.iter(|| det(black_box(m))));
    }
    // Entries near 2^40 push Bareiss out of i128 and onto big integers.
    let wide = IntMatrix::from_fn(30, |i, j| BigInt::from(((i * 31 + j * 17) % 97) as i64) << 40);
    group.bench_function("wide_30", |b| b.iter(|| det(black_box(&wide))));
    group.finish();
}

fn k_routes(c: &mut Criterion) {
    let mut group = c.benchmark_group("cofactor_sum");
    for n in [10, 30, 60] {
        let m = beta_matrix(n);
        group.bench_with_input(BenchmarkId::new("definition", n), &m, |b, m| b.iter(|| cofactor_sum(black_box(m))));
        group.bench_with_input(BenchmarkId::new("solve", n), &m, |b, m| {
            b.iter(|| cofactor_sum_by_solve(black_box(m)))
        });
    }
    group.finish();
}

criterion_group!(benches, determinants, k_routes);
criterion_main!(benches);
