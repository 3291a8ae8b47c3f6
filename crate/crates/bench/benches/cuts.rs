use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use gso_bench::{concave, submodular};
use gso_core::cuts::{ali_generate, epi_separate, lift_epi_exact, DEFAULT_LIFT_CAP};
use gso_core::Permutation;

fn separation(c: &mut Criterion) {
    let mut g = c.benchmark_group("epi_separate");
    for n in [8, 16, 32] {
        let f = submodular(n);
        let x: Vec<f64> = (0..n).map(|i| ((i * 37) % 11) as f64 / 10.0).collect();
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| epi_separate(&f, black_box(&x)).unwrap())
        });
    }
    g.finish();
}

fn lifting(c: &mut Criterion) {
    let mut g = c.benchmark_group("lifting");
    for n in [10, 20] {
        let f = concave(n);
        let perm = Permutation::identity(n);
        let seed: Vec<usize> = (0..3).collect();
        g.bench_with_input(BenchmarkId::new("ali", n), &n, |b, _| {
            b.iter(|| ali_generate(&f, 3, black_box(&perm)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("lepi", n), &n, |b, _| {
            b.iter(|| lift_epi_exact(&f, 3, &seed, black_box(&perm), DEFAULT_LIFT_CAP).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, separation, lifting);
criterion_main!(benches);
