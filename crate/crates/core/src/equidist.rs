//! Double-coset tables `𝒟_X`, Weyl sums of the symbol mod 1, star discrepancy
//! and log-log growth fits.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};
use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::FromPrimitive;
use rayon::prelude::*;

use crate::classical::dedekind_sum_scaled;
use crate::cocycle::{omega_with_product, GroupElement};
use crate::error::{Error, Result};
use crate::field::{format_rational, FieldElement, Rational};
use crate::hecke::{HeckeGroup, NormalizedElement};

/// Precision used for embedding symbol values mod 1.
pub const DEFAULT_BITS: u32 = 128;

const CHUNK: usize = 4096;

#[derive(Clone, Debug)]
enum Stored {
    /// `q = 3`: the symbol is `s(a,c) = scaled / 6c`.
    Classical { a: i64, c: i64, scaled: i64 },
    Hecke(Box<HeckeEntry>),
}

#[derive(Clone, Debug)]
struct HeckeEntry {
    a: FieldElement,
    c: FieldElement,
    symbol: FieldElement,
}

/// One double coset with `0 ≤ a < c`, in normalized coordinates.
#[derive(Clone, Debug)]
pub struct CosetEntry {
    stored: Stored,
    c_f64: f64,
    mod1: f64,
}

impl CosetEntry {
    pub fn a_text(&self) -> String {
        match &self.stored {
            Stored::Classical { a, .. } => a.to_string(),
            Stored::Hecke(h) => h.a.to_string(),
        }
    }

    pub fn c_text(&self) -> String {
        match &self.stored {
            Stored::Classical { c, .. } => c.to_string(),
            Stored::Hecke(h) => h.c.to_string(),
        }
    }

    pub fn symbol_text(&self) -> String {
        match &self.stored {
            Stored::Classical { c, scaled, .. } => {
                format_rational(&Rational::new((*scaled).into(), (6 * c).into()))
            }
            Stored::Hecke(h) => h.symbol.to_string(),
        }
    }

    /// Exact symbol for `q = 3` entries.
    pub fn symbol_rational(&self) -> Option<Rational> {
        match &self.stored {
            Stored::Classical { c, scaled, .. } => {
                Some(Rational::new((*scaled).into(), (6 * c).into()))
            }
            Stored::Hecke(h) => h.symbol.to_rational(),
        }
    }

    /// Exact symbol for entries of a `q > 3` table.
    pub fn symbol_field(&self) -> Option<&FieldElement> {
        match &self.stored {
            Stored::Hecke(h) => Some(&h.symbol),
            Stored::Classical { .. } => None,
        }
    }

    /// Integer column `(a, c)` for `q = 3` entries.
    pub fn classical_column(&self) -> Option<(i64, i64)> {
        match self.stored {
            Stored::Classical { a, c, .. } => Some((a, c)),
            Stored::Hecke(_) => None,
        }
    }

    pub fn c_f64(&self) -> f64 {
        self.c_f64
    }

    /// Symbol reduced mod 1 exactly, then embedded.
    pub fn symbol_mod1(&self) -> f64 {
        self.mod1
    }

    fn c_at_most(&self, x: f64) -> bool {
        match &self.stored {
            Stored::Classical { c, .. } => (*c as f64) <= x,
            Stored::Hecke(h) => match Rational::from_f64(x) {
                Some(xr) => h.c.cmp_rational(&xr) != Ordering::Greater,
                None => x.is_infinite() && x > 0.0,
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct CosetTable {
    q: u32,
    x: f64,
    entries: Vec<CosetEntry>,
    complete: bool,
}

impl CosetTable {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn entries(&self) -> &[CosetEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// False when a `max_depth` guard cut the search short.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn mod1_values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.mod1).collect()
    }

    /// Sub-table with `c ≤ x`.
    pub fn restrict(&self, x: f64) -> CosetTable {
        let entries = self
            .entries
            .iter()
            .take_while(|e| e.c_f64 <= x + 1.0)
            .filter(|e| e.c_at_most(x))
            .cloned()
            .collect();
        CosetTable {
            q: self.q,
            x: x.min(self.x),
            entries,
            complete: self.complete,
        }
    }

    /// Columns `q,X,a,c,symbol_exact,symbol_mod1`.
    pub fn export_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["q", "X", "a", "c", "symbol_exact", "symbol_mod1"])?;
        let (q, x) = (self.q.to_string(), self.x.to_string());
        for e in &self.entries {
            w.write_record([
                q.as_str(),
                x.as_str(),
                &e.a_text(),
                &e.c_text(),
                &e.symbol_text(),
                &format!("{:.17}", e.mod1),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    /// Embedding precision for the mod-1 values.
    pub bits: u32,
    /// Word-length guard for the `q > 3` search.
    pub max_depth: Option<usize>,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            bits: DEFAULT_BITS,
            max_depth: None,
        }
    }
}

/// All double cosets with `0 ≤ a < c ≤ X`.
pub fn enumerate(q: i64, x: f64) -> Result<CosetTable> {
    enumerate_with(q, x, EnumerateOptions::default())
}

pub fn enumerate_with(q: i64, x: f64, opts: EnumerateOptions) -> Result<CosetTable> {
    if !(x >= 1.0) {
        return Err(Error::DegenerateSamples(format!("X must be at least 1, got {x}")));
    }
    if q == 3 {
        return Ok(enumerate_classical(x));
    }
    enumerate_hecke(&HeckeGroup::new(q)?, x, opts)
}

fn enumerate_classical(x: f64) -> CosetTable {
    let cmax = x.floor() as i64;
    let entries: Vec<CosetEntry> = (1..=cmax)
        .into_par_iter()
        .flat_map_iter(|c| {
            (0..c).filter(move |a| a.gcd(&c) == 1).map(move |a| {
                let scaled = dedekind_sum_scaled(a, c).expect("coprime pair");
                let den = 6 * c;
                CosetEntry {
                    stored: Stored::Classical { a, c, scaled },
                    c_f64: c as f64,
                    mod1: scaled.rem_euclid(den) as f64 / den as f64,
                }
            })
        })
        .collect();
    CosetTable {
        q: 3,
        x,
        entries,
        complete: true,
    }
}

struct Node {
    m: GroupElement,
    psi: FieldElement,
    depth: usize,
}

/// Breadth-first search over columns from that of `ι′`. The children of a
/// column `v` are the columns of `ι′τ′ᵐv`; Rosen reduction on columns strictly
/// lowers `|c|`, so every column with `|c| ≤ X` is reached through columns
/// with `|c| ≤ X`.
fn enumerate_hecke(g: &HeckeGroup, x: f64, opts: EnumerateOptions) -> Result<CosetTable> {
    let field = g.field();
    let xr = Rational::from_f64(x)
        .ok_or_else(|| Error::DegenerateSamples(format!("X must be finite, got {x}")))?;
    let gens = g.generator_values();
    let iota = &gens.iota;
    let minus = GroupElement::identity(field).neg();
    let half = Rational::new((-1).into(), 2.into());
    // |λ(a + mc)| ≤ X  ⇔  |a + mc| ≤ X/λ
    let bound = &FieldElement::from_rational(field, &xr) * g.lambda_inverse();

    let mut seen: HashSet<(FieldElement, FieldElement)> = HashSet::new();
    let mut found: Vec<(FieldElement, FieldElement, GroupElement, FieldElement)> = Vec::new();
    let mut queue = VecDeque::new();
    let mut complete = true;

    let root = Node {
        m: iota.clone(),
        psi: gens.psi_iota.clone(),
        depth: 1,
    };
    if root.m.c().cmp_rational(&xr) != Ordering::Greater {
        let key = normal_form(root.m.a(), root.m.c());
        seen.insert(key.clone());
        found.push((key.0, key.1, root.m.clone(), root.psi.clone()));
        queue.push_back(root);
    }

    while let Some(node) = queue.pop_front() {
        if opts.max_depth.is_some_and(|d| node.depth >= d) {
            complete = false;
            continue;
        }
        let (a, c) = (node.m.a(), node.m.c());
        // m ranges over integers with |a + mc| ≤ X/λ.
        let c_abs = c.abs();
        let lo = (&(-a) - &bound).try_div(&c_abs)?.floor();
        let hi = (&(-a) + &bound)
            .try_div(&c_abs)?
            .floor()
            + 1;
        let mut m = lo;
        while m <= hi {
            let t = &node.m;
            let shift = FieldElement::from_integer(field, m.clone());
            let moved_a = a + &c.scale_int(&m);
            let within = !moved_a.is_zero()
                && (&moved_a * g.lambda()).abs().cmp_rational(&xr) != Ordering::Greater;
            if within {
                let key_c = &moved_a * g.lambda();
                let key_a = -&(c * &g.lambda_inverse());
                let key = normal_form(&key_a, &key_c);
                if !seen.contains(&key) {
                    // ψ(τ′ᵐ·t) then ψ(ι′·τ′ᵐ·t), with ω(τ′ᵐ, t) from the sign formula.
                    let tm = translate_left(t, &shift);
                    let tr = GroupElement::identity(field).mul_translation(&shift);
                    let psi_t = g.psi_tau().scale_int(&m);
                    let w1 = omega_with_product(&tr, t, &tm)?;
                    let psi1 = (&psi_t + &node.psi).add_rational(&w1.to_rational());
                    let next = iota.mul(&tm);
                    let w2 = omega_with_product(iota, &tm, &next)?;
                    let mut psi2 = (&gens.psi_iota + &psi1).add_rational(&w2.to_rational());
                    let mut next = next;
                    if next.c().sign() < 0 {
                        let neg = next.neg();
                        let w3 = omega_with_product(&minus, &next, &neg)?;
                        psi2 = psi2.add_rational(&(&half + &w3.to_rational()));
                        next = neg;
                    }
                    seen.insert(key.clone());
                    found.push((key.0, key.1, next.clone(), psi2.clone()));
                    queue.push_back(Node {
                        m: next,
                        psi: psi2,
                        depth: node.depth + 1,
                    });
                }
            }
            m += 1;
        }
    }

    let mut entries: Vec<(FieldElement, CosetEntry)> = found
        .into_par_iter()
        .map(|(a, c, m, psi)| -> Result<(FieldElement, CosetEntry)> {
            let symbol = g
                .symbol_from_parts(&NormalizedElement::from_normalized(m), &psi)?
                .into_value();
            let mod1 = symbol.fract().to_float(opts.bits).midpoint();
            let c_f64 = c.to_f64();
            Ok((
                a.clone(),
                CosetEntry {
                    stored: Stored::Hecke(Box::new(HeckeEntry { a, c, symbol })),
                    c_f64,
                    mod1,
                },
            ))
        })
        .collect::<Result<_>>()?;
    entries.sort_by(|(a1, e1), (a2, e2)| {
        let (Stored::Hecke(h1), Stored::Hecke(h2)) = (&e1.stored, &e2.stored) else {
            unreachable!()
        };
        h1.c.cmp_embedded(&h2.c).then_with(|| a1.cmp_embedded(a2))
    });
    Ok(CosetTable {
        q: g.q(),
        x,
        entries: entries.into_iter().map(|(_, e)| e).collect(),
        complete,
    })
}

/// `(1 n; 0 1)·t`
fn translate_left(t: &GroupElement, n: &FieldElement) -> GroupElement {
    GroupElement::identity(t.field()).mul_translation(n).mul(t)
}

/// `(a mod c, c)` with `c > 0` and the residue in `[0, c)`.
fn normal_form(a: &FieldElement, c: &FieldElement) -> (FieldElement, FieldElement) {
    let (a, c) = if c.sign() < 0 { (-a, -c) } else { (a.clone(), c.clone()) };
    let k = a.try_div(&c).expect("c ≠ 0").floor();
    (&a - &c.scale_int(&k), c)
}

/// `Σ e(n·𝒮)` over the table. `n = 0` gives the count.
pub fn weyl_sum(table: &CosetTable, n: i64) -> Complex64 {
    if n == 0 {
        return Complex64::new(table.len() as f64, 0.0);
    }
    let partial: Vec<Complex64> = table
        .entries
        .par_chunks(CHUNK)
        .map(|chunk| {
            chunk
                .iter()
                .map(|e| {
                    let t = (n as f64 * e.mod1).rem_euclid(1.0);
                    Complex64::from_polar(1.0, 2.0 * PI * t)
                })
                .sum()
        })
        .collect();
    partial.into_iter().sum()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthFit {
    pub exponent: f64,
    pub constant: f64,
}

/// Least-squares fit of `log value = exponent·log X + log constant`.
pub fn growth_fit(points: &[(f64, f64)]) -> Result<GrowthFit> {
    if points.len() < 5 {
        return Err(Error::DegenerateSamples(format!(
            "need at least 5 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::DegenerateSamples("X and values must be positive".into()));
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateSamples("all X equal".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    Ok(GrowthFit {
        exponent,
        constant: (my - exponent * mx).exp(),
    })
}

#[derive(Clone, Debug)]
pub struct WeylSumSeries {
    pub q: u32,
    pub n: i64,
    pub values: Vec<(f64, Complex64)>,
    pub fit: Option<GrowthFit>,
}

impl WeylSumSeries {
    /// Weyl sums of `table` restricted to each checkpoint.
    pub fn from_table(table: &CosetTable, n: i64, checkpoints: &[f64]) -> Self {
        let values: Vec<(f64, Complex64)> = checkpoints
            .iter()
            .map(|&x| (x, weyl_sum(&table.restrict(x), n)))
            .collect();
        let pts: Vec<(f64, f64)> = values.iter().map(|(x, v)| (*x, v.norm())).collect();
        WeylSumSeries {
            q: table.q(),
            n,
            fit: growth_fit(&pts).ok(),
            values,
        }
    }

    /// Columns `q,n,X,re,im,abs`.
    pub fn export_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        write_series_csv(std::slice::from_ref(self), path)
    }
}

pub fn write_series_csv(series: &[WeylSumSeries], path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["q", "n", "X", "re", "im", "abs"])?;
    for s in series {
        for (x, v) in &s.values {
            w.write_record([
                s.q.to_string(),
                s.n.to_string(),
                x.to_string(),
                format!("{:.12}", v.re),
                format!("{:.12}", v.im),
                format!("{:.12}", v.norm()),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Star discrepancy `max_i max(i/N - x_(i), x_(i) - (i-1)/N)` of points in `[0, 1)`.
pub fn discrepancy(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::DegenerateSamples("empty point set".into()));
    }
    let mut xs = values.to_vec();
    xs.par_sort_unstable_by(f64::total_cmp);
    let n = xs.len() as f64;
    Ok(xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let i = i as f64;
            ((i + 1.0) / n - x).max(x - i / n)
        })
        .fold(0.0, f64::max))
}

/// `√2`-spaced checkpoints `x0·2^{k/2}` up to `xmax`, always ending at `xmax`.
pub fn geometric_checkpoints(x0: f64, xmax: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut x = x0;
    while x < xmax * (1.0 - 1e-9) {
        out.push(x.round());
        x *= std::f64::consts::SQRT_2;
    }
    out.push(xmax);
    out.dedup();
    out
}

/// `Σ_{c ≤ X} φ(c)`, the size of the `q = 3` table.
pub fn totient_sum(x: u64) -> u64 {
    (1..=x).map(crate::field::totient).sum()
}
