//! Acceptance criteria as runnable checks. Inputs are deterministic: random
//! samples come from fixed-seed ChaCha generators, and parallel work is merged
//! in index order.

use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classical::{
    dedekind_sum_fast, dedekind_sum_naive, eta_base_point, eta_terms, phi_via_eta,
    rademacher_phi, rademacher_psi, reciprocity_residual, CoprimePair, IntegerMatrix,
};
use crate::cocycle::{omega, omega_analytic, GroupElement, QuarterInteger};
use crate::equidist::{discrepancy, enumerate, geometric_checkpoints, growth_fit, weyl_sum};
use crate::error::Result;
use crate::field::{LambdaField, Rational};
use crate::hecke::{HeckeGroup, NormalizedElement};
use crate::word::{Letter, Word};

pub const DEDEKIND_MAX_C: i64 = 500;
pub const RECIPROCITY_MAX_C: i64 = 300;
pub const ETA_SAMPLES: usize = 100;
pub const ETA_ENTRY_BOUND: i64 = 1000;
pub const ETA_TOLERANCE: f64 = 1e-8;
pub const COCYCLE_TRIPLES: usize = 10_000;
pub const ANALYTIC_PAIRS: usize = 1_000;
pub const ANALYTIC_TOLERANCE: f64 = 1e-10;
pub const PSI_PAIRS: usize = 10_000;
pub const CROSS_MAX_LEN: usize = 12;
pub const BRIDGE_MAX_C: i64 = 200;
pub const RATIONALITY_MAX_LEN: usize = 10;
pub const EQUIDIST_X: f64 = 1500.0;
pub const DISCREPANCY_CHECKPOINTS: [f64; 4] = [200.0, 400.0, 800.0, 1500.0];
pub const DISCREPANCY_MAX: f64 = 0.05;
pub const DISCREPANCY_JITTER: f64 = 0.10;
pub const WEYL_EXPONENT_MAX: f64 = 1.6;
pub const COUNT_EXPONENT: f64 = 2.0;
pub const COUNT_EXPONENT_TOLERANCE: f64 = 0.1;
pub const FIT_START: f64 = 100.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Classical,
    Cocycle,
    Hecke,
    Equidist,
    All,
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Classical => &[1, 2, 3],
            Suite::Cocycle => &[4, 5, 6],
            Suite::Hecke => &[7, 8, 9],
            Suite::Equidist => &[10],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "classical" => Suite::Classical,
            "cocycle" => Suite::Cocycle,
            "hecke" => Suite::Hecke,
            "equidist" => Suite::Equidist,
            "all" => Suite::All,
            other => return Err(format!("unknown suite `{other}`")),
        })
    }
}

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {} ({:.1}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

pub fn criterion_name(id: u8) -> &'static str {
    match id {
        1 => "fast = naive Dedekind sums",
        2 => "Dedekind reciprocity",
        3 => "eta oracle for phi",
        4 => "omega cocycle suite",
        5 => "psi coboundary at q=3",
        6 => "constants",
        7 => "Algorithm A = Algorithm B",
        8 => "q=3 bridge",
        9 => "rationality support",
        10 => "equidistribution",
        _ => "unknown",
    }
}

pub fn run_suite(suite: Suite) -> Vec<CriterionOutcome> {
    suite.criteria().iter().map(|&id| run_criterion(id)).collect()
}

pub fn run_criterion(id: u8) -> CriterionOutcome {
    let start = Instant::now();
    let result = match id {
        1 => criterion_fast_naive(),
        2 => criterion_reciprocity(),
        3 => criterion_eta(),
        4 => criterion_cocycle(),
        5 => criterion_psi_coboundary(),
        6 => criterion_constants(),
        7 => criterion_cross_algorithm(),
        8 => criterion_bridge(),
        9 => criterion_rationality(),
        10 => criterion_equidist(),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionOutcome {
        id,
        name: criterion_name(id),
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

type Check = Result<(bool, String)>;

fn criterion_fast_naive() -> Check {
    let bad: Vec<(i64, i64)> = (1..=DEDEKIND_MAX_C)
        .into_par_iter()
        .flat_map_iter(|c| {
            (0..c).filter(move |a| a.gcd(&c) == 1).filter_map(move |a| {
                let p = CoprimePair::new(a, c).expect("coprime");
                (dedekind_sum_fast(&p) != dedekind_sum_naive(&p)).then_some((a, c))
            })
        })
        .collect();
    let total: u64 = (1..=DEDEKIND_MAX_C as u64).map(crate::field::totient).sum();
    Ok((
        bad.is_empty(),
        format!("{} pairs with c <= {DEDEKIND_MAX_C}, {} mismatches {:?}", total, bad.len(), first(&bad)),
    ))
}

fn criterion_reciprocity() -> Check {
    let mut count = 0u64;
    let mut bad = Vec::new();
    for c in 2..=RECIPROCITY_MAX_C {
        for a in 1..c {
            if a.gcd(&c) != 1 {
                continue;
            }
            count += 1;
            if !reciprocity_residual(a, c)?.is_zero() {
                bad.push((a, c));
            }
        }
    }
    Ok((
        bad.is_empty(),
        format!("{count} pairs 0 < a < c <= {RECIPROCITY_MAX_C}, {} nonzero residuals {:?}", bad.len(), first(&bad)),
    ))
}

fn first<T: Clone>(v: &[T]) -> Vec<T> {
    v.iter().take(3).cloned().collect()
}

/// Random element of `SL₂(ℤ)` with entries bounded by `bound`. About one in
/// eight samples is `±(1 n; 0 1)`.
pub fn random_sl2z(rng: &mut impl Rng, bound: i64) -> IntegerMatrix {
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    if rng.gen_ratio(1, 8) {
        let n = rng.gen_range(-bound..=bound);
        return IntegerMatrix::new(sign, sign * n, 0, sign).expect("det 1");
    }
    loop {
        let a = rng.gen_range(-bound..=bound);
        let c = rng.gen_range(-bound..=bound);
        if c == 0 || a.gcd(&c) != 1 {
            continue;
        }
        // Bézout: x·a + y·c = 1, giving (a, -y; c, x); shift by multiples of
        // the first column to randomize b and d within the bound.
        let e = a.extended_gcd(&c);
        let (mut b, mut d) = (-e.y, e.x);
        if e.gcd < 0 {
            b = -b;
            d = -d;
        }
        let k = rng.gen_range(-3..=3);
        let (b2, d2) = (b + k * a, d + k * c);
        if b2.abs() <= bound && d2.abs() <= bound {
            b = b2;
            d = d2;
        }
        if b.abs() <= bound && d.abs() <= bound {
            return IntegerMatrix::new(a, b, c, d).expect("det 1");
        }
    }
}

fn criterion_eta() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut bad = 0;
    for _ in 0..ETA_SAMPLES {
        let m = random_sl2z(&mut rng, ETA_ENTRY_BOUND);
        let z = eta_base_point(&m);
        let terms = eta_terms(z).max(eta_terms(m.act(z)));
        let approx = phi_via_eta(&m, z, terms);
        let exact = to_f64(&rademacher_phi(&m));
        let err = (approx - exact).abs();
        worst = worst.max(err);
        if !(err < ETA_TOLERANCE) {
            bad += 1;
        }
    }
    Ok((
        bad == 0,
        format!("{ETA_SAMPLES} matrices, entries <= {ETA_ENTRY_BOUND}, max error {worst:.2e} (tol {ETA_TOLERANCE:.0e})"),
    ))
}

fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Random word with `len` letters over `ι^{±1}` and `τ^{±1..±3}`.
pub fn random_word(rng: &mut impl Rng, len: usize) -> Word {
    let mut w = Word::new();
    for _ in 0..len {
        if rng.gen_bool(0.5) {
            w.push(Letter::iota(if rng.gen_bool(0.5) { 1 } else { -1 }));
        } else {
            let n = rng.gen_range(1..=3);
            w.push(Letter::tau(if rng.gen_bool(0.5) { n } else { -n }));
        }
    }
    w
}

fn random_element(rng: &mut impl Rng, g: &HeckeGroup) -> GroupElement {
    if g.q() == 3 {
        let f = g.field();
        GroupElement::from_integer_matrix(f, &random_sl2z(rng, 40))
    } else {
        let len = rng.gen_range(0..=8);
        g.word_to_matrix(&random_word(rng, len)).into_element()
    }
}

fn criterion_cocycle() -> Check {
    let mut details = Vec::new();
    let mut ok = true;
    for q in [3i64, 5, 7] {
        let g = HeckeGroup::new(q)?;
        let mut rng = ChaCha8Rng::seed_from_u64(40 + q as u64);
        let mut identity_failures = 0;
        let mut range_failures = 0;
        for _ in 0..COCYCLE_TRIPLES {
            let (x, y, z) = (
                random_element(&mut rng, &g),
                random_element(&mut rng, &g),
                random_element(&mut rng, &g),
            );
            let xy = x.mul(&y);
            let yz = y.mul(&z);
            let ws = [omega(&x, &y)?, omega(&xy, &z)?, omega(&x, &yz)?, omega(&y, &z)?];
            if ws.iter().any(|w| !w.in_cocycle_range()) {
                range_failures += 1;
            }
            if ws[0].quarters() + ws[1].quarters() != ws[2].quarters() + ws[3].quarters() {
                identity_failures += 1;
            }
        }
        let mut worst = 0.0f64;
        let bases = [Complex64::i(), Complex64::new(1.0, 2.0)];
        for _ in 0..ANALYTIC_PAIRS {
            let (x, y) = (random_element(&mut rng, &g), random_element(&mut rng, &g));
            let exact = omega(&x, &y)?.to_f64();
            for z in bases {
                worst = worst.max((omega_analytic(&x, &y, z)? - exact).abs());
            }
        }
        let pass = identity_failures == 0 && range_failures == 0 && worst < ANALYTIC_TOLERANCE;
        ok &= pass;
        details.push(format!(
            "q={q}: identity failures {identity_failures}/{COCYCLE_TRIPLES}, range failures {range_failures}, analytic max err {worst:.1e}"
        ));
    }
    Ok((ok, details.join("; ")))
}

fn criterion_psi_coboundary() -> Check {
    let f = LambdaField::get(3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bad = Vec::new();
    let mut parabolic = 0;
    for _ in 0..PSI_PAIRS {
        let (g, h) = (random_sl2z(&mut rng, ETA_ENTRY_BOUND), random_sl2z(&mut rng, ETA_ENTRY_BOUND));
        let gh = g.mul(&h);
        if g.c.is_zero() || h.c.is_zero() || gh.c.is_zero() {
            parabolic += 1;
        }
        let lhs = rademacher_psi(&gh) - rademacher_psi(&g) - rademacher_psi(&h);
        let w = omega(
            &GroupElement::from_integer_matrix(&f, &g),
            &GroupElement::from_integer_matrix(&f, &h),
        )?;
        if lhs != w.to_rational() {
            bad.push(format!("{g} * {h}"));
        }
    }
    Ok((
        bad.is_empty(),
        format!("{PSI_PAIRS} pairs ({parabolic} with a zero c), {} failures {:?}", bad.len(), first(&bad)),
    ))
}

fn criterion_constants() -> Check {
    let mut failures = Vec::new();
    let quarter = |n: i64| Rational::new(n.into(), 4.into());
    if rademacher_psi(&IntegerMatrix::iota()) != quarter(-1) {
        failures.push("classical psi(iota)");
    }
    if rademacher_psi(&IntegerMatrix::identity().neg()) != quarter(-2) {
        failures.push("classical psi(-I)");
    }
    if !rademacher_psi(&IntegerMatrix::identity()).is_zero() {
        failures.push("classical psi(I)");
    }
    for q in 3..=7 {
        let g = HeckeGroup::new(q)?;
        let psi = |s: &str| -> Result<Option<Rational>> {
            Ok(g.psi_word(&Word::parse(s)?)?.value().to_rational())
        };
        if psi("i")? != Some(quarter(-1)) {
            failures.push("psi(iota')");
        }
        if psi("i,i")? != Some(quarter(-2)) {
            failures.push("psi(-I)");
        }
        if psi("")? != Some(quarter(0)) {
            failures.push("psi(I)");
        }
        if !g.symbol_from_word(&Word::parse("i")?)?.value().is_zero() {
            failures.push("S([[iota']])");
        }
        let minus = GroupElement::identity(g.field()).neg();
        if omega(&minus, &minus)? != QuarterInteger::from_quarters(4) {
            failures.push("omega(-I,-I)");
        }
    }
    failures.dedup();
    Ok((
        failures.is_empty(),
        if failures.is_empty() {
            "psi(iota) = -1/4, psi(-I) = -1/2, psi(I) = 0, S([[iota]]) = 0, omega(-I,-I) = 1 for q = 3..7".into()
        } else {
            format!("wrong: {failures:?}")
        },
    ))
}

/// Reduced words of length `1..=max_len` over `ι, τ, τ⁻¹`: no `ιι`, `ττ⁻¹`
/// or `τ⁻¹τ`. Each word is returned with its letter sequence flattened.
pub fn reduced_words(max_len: usize) -> Vec<Word> {
    // 0 = ι, 1 = τ, 2 = τ⁻¹
    fn extend(prefix: &mut Vec<u8>, max_len: usize, out: &mut Vec<Word>) {
        if !prefix.is_empty() {
            out.push(Word::from_letters(prefix.iter().map(|&l| match l {
                0 => Letter::iota(1),
                1 => Letter::tau(1),
                _ => Letter::tau(-1),
            })));
        }
        if prefix.len() == max_len {
            return;
        }
        for next in 0..3u8 {
            let allowed = match (prefix.last(), next) {
                (Some(0), 0) | (Some(1), 2) | (Some(2), 1) => false,
                _ => true,
            };
            if allowed {
                prefix.push(next);
                extend(prefix, max_len, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), max_len, &mut out);
    out
}

fn criterion_cross_algorithm() -> Check {
    let words = reduced_words(CROSS_MAX_LEN);
    let mut details = Vec::new();
    let mut ok = true;
    for q in 3..=7 {
        let g = HeckeGroup::new(q)?;
        let results: Vec<Result<Option<bool>>> = words
            .par_iter()
            .map(|w| {
                let (m, psi) = g.evaluate_word(w)?;
                if m.element().c().is_zero() {
                    return Ok(None);
                }
                let a = g.symbol_from_parts(&m, psi.value())?;
                let b = g.symbol_descent(&m.row()?)?;
                Ok(Some(a == b))
            })
            .collect();
        let mut compared = 0;
        let mut mismatches = 0;
        for r in results {
            match r? {
                Some(true) => compared += 1,
                Some(false) => {
                    compared += 1;
                    mismatches += 1;
                }
                None => {}
            }
        }
        ok &= mismatches == 0;
        details.push(format!("q={q}: {compared} words, {mismatches} mismatches"));
    }
    Ok((ok, format!("{} reduced words of length <= {CROSS_MAX_LEN}; {}", words.len(), details.join("; "))))
}

fn criterion_bridge() -> Check {
    let g = HeckeGroup::new(3)?;
    let f = g.field().clone();
    let pairs: Vec<(i64, i64)> = (1..=BRIDGE_MAX_C)
        .flat_map(|c| (0..c).filter(move |a| a.gcd(&c) == 1).map(move |a| (a, c)))
        .collect();
    let results: Vec<Result<(bool, Option<bool>)>> = pairs
        .par_iter()
        .map(|&(a, c)| {
            let m = IntegerMatrix::from_column(a, c)?;
            let n = NormalizedElement::from_normalized(GroupElement::from_integer_matrix(&f, &m));
            let s = dedekind_sum_fast(&CoprimePair::new(a, c)?);
            let by_descent = g.symbol_descent(&n.row()?)?;
            let by_word = g.symbol_of_element(&n)?;
            let same = by_descent.value().to_rational() == Some(s.clone())
                && by_word.value().to_rational() == Some(s);
            let recip = if m.d.is_zero() {
                None
            } else {
                Some(g.reciprocity_residual_hecke(&n)?.is_zero())
            };
            Ok((same, recip))
        })
        .collect();
    let (mut sym_bad, mut rec_bad, mut rec_n) = (0, 0, 0);
    for r in results {
        let (same, recip) = r?;
        sym_bad += usize::from(!same);
        if let Some(z) = recip {
            rec_n += 1;
            rec_bad += usize::from(!z);
        }
    }
    Ok((
        sym_bad == 0 && rec_bad == 0,
        format!(
            "{} coprime pairs c <= {BRIDGE_MAX_C}: {sym_bad} symbol mismatches (both algorithms), {rec_bad}/{rec_n} nonzero reciprocity residuals",
            pairs.len()
        ),
    ))
}

fn criterion_rationality() -> Check {
    let words = reduced_words(RATIONALITY_MAX_LEN);
    let mut ok = true;
    let mut details = Vec::new();
    for q in [5i64, 7] {
        let g = HeckeGroup::new(q)?;
        let mut outside = 0;
        let mut non_rational = 0;
        for w in &words {
            let rep = g.rationality_report(w)?;
            outside += usize::from(!rep.support_in_span);
            non_rational += usize::from(rep.coords.iter().skip(1).any(|c| !c.is_zero()));
        }
        ok &= outside == 0;
        details.push(format!(
            "q={q}: {} words, {outside} with support beyond {{1, L}}, {non_rational} with a nonzero L-coordinate",
            words.len()
        ));
    }
    Ok((ok, details.join("; ")))
}

fn criterion_equidist() -> Check {
    let table = enumerate(3, EQUIDIST_X)?;
    let mut ok = true;
    let mut parts = Vec::new();

    let mut ds = Vec::new();
    for &x in &DISCREPANCY_CHECKPOINTS {
        ds.push(discrepancy(&table.restrict(x).mod1_values())?);
    }
    let last = *ds.last().expect("checkpoints");
    let monotone = ds.windows(2).all(|w| w[1] <= w[0] * (1.0 + DISCREPANCY_JITTER));
    ok &= last < DISCREPANCY_MAX && monotone;
    parts.push(format!(
        "discrepancy {} (monotone within {:.0}%: {monotone})",
        DISCREPANCY_CHECKPOINTS
            .iter()
            .zip(&ds)
            .map(|(x, d)| format!("X={x}:{d:.4}"))
            .collect::<Vec<_>>()
            .join(" "),
        DISCREPANCY_JITTER * 100.0
    ));

    let checkpoints = geometric_checkpoints(FIT_START, EQUIDIST_X);
    let subtables: Vec<_> = checkpoints.iter().map(|&x| table.restrict(x)).collect();
    for n in 1..=3 {
        let pts: Vec<(f64, f64)> = checkpoints
            .iter()
            .zip(&subtables)
            .map(|(&x, t)| (x, weyl_sum(t, n).norm()))
            .collect();
        let fit = growth_fit(&pts)?;
        ok &= fit.exponent <= WEYL_EXPONENT_MAX;
        parts.push(format!("|W_{n}| exponent {:.3}", fit.exponent));
    }
    let counts: Vec<(f64, f64)> = checkpoints
        .iter()
        .zip(&subtables)
        .map(|(&x, t)| (x, t.len() as f64))
        .collect();
    let fit = growth_fit(&counts)?;
    ok &= (fit.exponent - COUNT_EXPONENT).abs() <= COUNT_EXPONENT_TOLERANCE;
    parts.push(format!(
        "count exponent {:.3}, constant {:.4} (V/4pi = {:.4}, 3/pi^2 = {:.4})",
        fit.exponent,
        fit.constant,
        1.0 / 12.0,
        3.0 / (PI * PI)
    ));
    parts.push(format!("|D_X| = {} at X = {EQUIDIST_X}", table.len()));
    Ok((ok, parts.join("; ")))
}
