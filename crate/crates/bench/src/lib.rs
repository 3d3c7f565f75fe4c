//! Shared workloads for the benchmarks.

use dedesym_core::{Letter, Word};

/// Coprime pairs `(a, c)` with `c` near `scale`.
pub fn coprime_pairs(scale: i64, count: usize) -> Vec<(i64, i64)> {
    let mut out = Vec::with_capacity(count);
    let mut c = scale;
    while out.len() < count {
        let a = (c * 7919 / 10_007) % c;
        if num_gcd(a, c) == 1 {
            out.push((a, c));
        }
        c += 1;
    }
    out
}

fn num_gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Alternating words `i t^e1 i t^e2 ...` with `len` τ-letters; exponents cycle through ±1..±3.
pub fn alternating_word(len: usize, seed: i64) -> Word {
    let mut w = Word::new();
    for k in 0..len as i64 {
        w.push(Letter::iota(1));
        let e = (seed + k) % 3 + 1;
        w.push(Letter::tau(if (seed + k) % 2 == 0 { e } else { -e }));
    }
    w
}
