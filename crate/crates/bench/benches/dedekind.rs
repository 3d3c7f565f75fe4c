use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dedesym_bench::coprime_pairs;
use dedesym_core::classical::{dedekind_sum_fast, dedekind_sum_naive, dedekind_sum_scaled, CoprimePair};
use std::hint::black_box;

fn dedekind(c: &mut Criterion) {
    let mut group = c.benchmark_group("dedekind");
    for scale in [100i64, 1_000, 10_000] {
        let pairs: Vec<CoprimePair> = coprime_pairs(scale, 16)
            .into_iter()
            .map(|(a, c)| CoprimePair::new(a, c).unwrap())
            .collect();
        let raw = coprime_pairs(scale, 16);
        group.bench_with_input(BenchmarkId::new("naive", scale), &pairs, |b, ps| {
            b.iter(|| ps.iter().map(|p| dedekind_sum_naive(black_box(p))).count())
        });
        group.bench_with_input(BenchmarkId::new("fast", scale), &pairs, |b, ps| {
            b.iter(|| ps.iter().map(|p| dedekind_sum_fast(black_box(p))).count())
        });
        group.bench_with_input(BenchmarkId::new("scaled", scale), &raw, |b, ps| {
            b.iter(|| {
                ps.iter()
                    .map(|&(a, c)| dedekind_sum_scaled(black_box(a), black_box(c)).unwrap())
                    .sum::<i64>()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, dedekind);
criterion_main!(benches);
