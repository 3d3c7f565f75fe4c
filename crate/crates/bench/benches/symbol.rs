use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dedesym_bench::alternating_word;
use dedesym_core::hecke::make_group;
use std::hint::black_box;

fn symbol(c: &mut Criterion) {
    let mut group = c.benchmark_group("symbol");
    for q in [3i64, 5, 7] {
        let g = make_group(q).unwrap();
        for len in [4usize, 12] {
            let word = alternating_word(len, q);
            let (m, _) = g.evaluate_word(&word).unwrap();
            let row = m.row().unwrap();
            let id = format!("q{q}/len{len}");
            group.bench_with_input(BenchmarkId::new("word", &id), &word, |b, w| {
                b.iter(|| g.symbol_from_word(black_box(w)).unwrap())
            });
            group.bench_with_input(BenchmarkId::new("descent", &id), &row, |b, r| {
                b.iter(|| g.symbol_descent(black_box(r)).unwrap())
            });
            group.bench_with_input(BenchmarkId::new("reduce", &id), &row, |b, r| {
                b.iter(|| g.rosen_reduce(black_box(r)).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, symbol);
criterion_main!(benches);
