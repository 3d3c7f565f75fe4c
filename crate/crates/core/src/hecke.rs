//! Hecke triangle groups `H_q = ⟨ι, τ_q⟩` and their Dedekind symbols.
//!
//! Internally every element is conjugated by `σ = diag(√λ, 1/√λ)`, so
//! `(a b; c d)` becomes `(a, b/λ; cλ, d)`. The cusp stabilizer is then the
//! unit translations and `τ_q` becomes `τ′ = (1 1; 0 1)`, `ι` becomes
//! `ι′ = (0, -1/λ; λ, 0)`. All entries stay in `ℚ(λ)`.
//!
//! The symbol `𝒮(γ) = κ(a+d)/c - ψ(γ) - ¼ sign(c)` with `κ = (q-2)/(4q)` is
//! computed two ways: by accumulating `ψ` along a generator word
//! ([`HeckeGroup::symbol_from_word`]), and by descent on the bottom row
//! ([`HeckeGroup::symbol_descent`]).

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cocycle::{psi_accumulate, GeneratorValues, GroupElement};
use crate::error::{Error, Result};
use crate::field::{FieldElement, LambdaField, Rational};
use crate::word::{Generator, Letter, Word};

/// Maximum number of swaps in a reduction.
pub const REDUCTION_CAP: usize = 10_000;

#[derive(Clone, Debug)]
pub struct HeckeGroup {
    q: u32,
    field: Arc<LambdaField>,
    lambda: FieldElement,
    lambda_inv: FieldElement,
    kappa: Rational,
    iota: GroupElement,
    tau: GroupElement,
    gens: GeneratorValues,
}

/// Element in normalized coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalizedElement(GroupElement);

impl NormalizedElement {
    /// Wraps a matrix already in normalized coordinates.
    pub fn from_normalized(g: GroupElement) -> Self {
        NormalizedElement(g)
    }

    pub fn element(&self) -> &GroupElement {
        &self.0
    }

    pub fn into_element(self) -> GroupElement {
        self.0
    }

    pub fn row(&self) -> Result<DoubleCosetRow> {
        DoubleCosetRow::new(self.0.c().clone(), self.0.d().clone())
    }

    pub fn mul(&self, other: &NormalizedElement) -> NormalizedElement {
        NormalizedElement(self.0.mul(&other.0))
    }
}

impl fmt::Display for NormalizedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Bottom row `(c, d)` in normalized coordinates, `c ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DoubleCosetRow {
    c: FieldElement,
    d: FieldElement,
}

impl DoubleCosetRow {
    pub fn new(c: FieldElement, d: FieldElement) -> Result<Self> {
        if c.q() != d.q() {
            return Err(Error::FieldMismatch {
                left: c.q(),
                right: d.q(),
            });
        }
        if c.is_zero() {
            return Err(Error::ZeroLowerLeft);
        }
        Ok(DoubleCosetRow { c, d })
    }

    pub fn c(&self) -> &FieldElement {
        &self.c
    }

    pub fn d(&self) -> &FieldElement {
        &self.d
    }

    /// Parses `c;d`.
    pub fn parse(field: &Arc<LambdaField>, input: &str) -> Result<Self> {
        let Some((c, d)) = input.split_once(';') else {
            return Err(Error::parse(input.len(), "expected `c;d`"));
        };
        let c = FieldElement::parse(field, c)?;
        let shift = input.find(';').unwrap_or(0) + 1;
        let d = FieldElement::parse(field, d).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse {
                pos: pos + shift,
                msg,
            },
            other => other,
        })?;
        DoubleCosetRow::new(c, d)
    }
}

impl fmt::Display for DoubleCosetRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.c, self.d)
    }
}

/// Exact value of `ψ` or `𝒮`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolValue(FieldElement);

impl SymbolValue {
    pub fn new(value: FieldElement) -> Self {
        SymbolValue(value)
    }

    pub fn value(&self) -> &FieldElement {
        &self.0
    }

    pub fn into_value(self) -> FieldElement {
        self.0
    }

    pub fn coords(&self) -> Vec<Rational> {
        self.0.coords()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Representative of the value mod 1 in `[0, 1)`, reduced exactly.
    pub fn mod_one(&self) -> FieldElement {
        self.0.fract()
    }
}

impl fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReductionStep {
    /// Right multiplication by `τ′ⁿ`: `d ← d + n·c`.
    Translate(i64),
    /// Right multiplication by `ι′`: `(c, d) ← (λd, -c/λ)`.
    Swap,
}

impl fmt::Display for ReductionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionStep::Translate(n) => write!(f, "T{n}"),
            ReductionStep::Swap => write!(f, "S"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReductionTrace {
    pub start: DoubleCosetRow,
    pub steps: Vec<ReductionStep>,
    /// Rows visited, one per step, ending at the terminal `(±λ, 0)`.
    pub rows: Vec<DoubleCosetRow>,
}

impl ReductionTrace {
    pub fn terminal(&self) -> &DoubleCosetRow {
        self.rows.last().unwrap_or(&self.start)
    }

    pub fn swaps(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, ReductionStep::Swap))
            .count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalityReport {
    /// Power-basis coordinates of `ψ` in normalized coordinates.
    pub coords: Vec<Rational>,
    /// Whether every coordinate of index ≥ 2 vanishes.
    pub support_in_span: bool,
    /// `ψ = r + s·λ`.
    pub psi_rs: (Rational, Rational),
    /// `λ·ψ = r + s·λ`, the value rescaled to the unnormalized cusp width.
    pub scaled_rs: (Rational, Rational),
}

pub fn make_group(q: i64) -> Result<HeckeGroup> {
    HeckeGroup::new(q)
}

impl HeckeGroup {
    pub fn new(q: i64) -> Result<Self> {
        let field = LambdaField::get(q)?;
        let lambda = FieldElement::lambda(&field);
        let lambda_inv = lambda.inv()?;
        let kappa = Rational::new(BigInt::from(q - 2), BigInt::from(4 * q));
        let zero = FieldElement::zero(&field);
        let one = FieldElement::one(&field);
        let iota = GroupElement::new(zero.clone(), -&one, one.clone(), zero.clone())?;
        let tau = GroupElement::new(one.clone(), lambda.clone(), zero.clone(), one.clone())?;
        let gens = GeneratorValues {
            iota: GroupElement::new(zero.clone(), -&lambda_inv, lambda.clone(), zero.clone())?,
            psi_iota: FieldElement::from_rational(&field, &Rational::new((-1).into(), 4.into())),
            tau: GroupElement::new(one.clone(), one.clone(), zero, one)?,
            psi_tau: FieldElement::from_rational(&field, &kappa),
        };
        Ok(HeckeGroup {
            q: field.q(),
            field,
            lambda,
            lambda_inv,
            kappa,
            iota,
            tau,
            gens,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn field(&self) -> &Arc<LambdaField> {
        &self.field
    }

    pub fn lambda(&self) -> &FieldElement {
        &self.lambda
    }

    pub fn lambda_inverse(&self) -> &FieldElement {
        &self.lambda_inv
    }

    /// `ψ(τ′) = κ`.
    pub fn psi_tau(&self) -> &FieldElement {
        &self.gens.psi_tau
    }

    /// `V/4π = (q-2)/(4q)`.
    pub fn kappa(&self) -> &Rational {
        &self.kappa
    }

    /// `ι` in the original coordinates.
    pub fn iota(&self) -> &GroupElement {
        &self.iota
    }

    /// `τ_q = (1 λ; 0 1)` in the original coordinates.
    pub fn tau(&self) -> &GroupElement {
        &self.tau
    }

    pub fn iota_normalized(&self) -> NormalizedElement {
        NormalizedElement(self.gens.iota.clone())
    }

    pub fn tau_normalized(&self) -> NormalizedElement {
        NormalizedElement(self.gens.tau.clone())
    }

    pub fn generator_values(&self) -> &GeneratorValues {
        &self.gens
    }

    fn check_field(&self, x: &FieldElement) -> Result<()> {
        if x.q() != self.q {
            return Err(Error::FieldMismatch {
                left: self.q,
                right: x.q(),
            });
        }
        Ok(())
    }

    /// `σ⁻¹gσ = (a, b/λ; cλ, d)`.
    pub fn normalize(&self, g: &GroupElement) -> Result<NormalizedElement> {
        self.check_field(g.a())?;
        Ok(NormalizedElement(GroupElement::from_entries_unchecked(
            g.a().clone(),
            g.b() * &self.lambda_inv,
            g.c() * &self.lambda,
            g.d().clone(),
        )))
    }

    /// Inverse of [`HeckeGroup::normalize`].
    pub fn denormalize(&self, g: &NormalizedElement) -> GroupElement {
        let g = &g.0;
        GroupElement::from_entries_unchecked(
            g.a().clone(),
            g.b() * &self.lambda,
            g.c() * &self.lambda_inv,
            g.d().clone(),
        )
    }

    pub fn word_to_matrix(&self, w: &Word) -> NormalizedElement {
        let mut m = GroupElement::identity(&self.field);
        for letter in w.letters() {
            match letter.generator {
                Generator::Iota => {
                    for _ in 0..letter.exponent.rem_euclid(4) {
                        m = m.mul(&self.gens.iota);
                    }
                }
                Generator::Tau => {
                    let n = FieldElement::from_int(&self.field, letter.exponent);
                    m = m.mul_translation(&n);
                }
            }
        }
        NormalizedElement(m)
    }

    /// `ψ` of the word's product, with `ψ(ι′) = -1/4` and `ψ(τ′ⁿ) = nκ`.
    pub fn psi_word(&self, w: &Word) -> Result<SymbolValue> {
        Ok(SymbolValue(psi_accumulate(w, &self.gens)?.1))
    }

    /// Matrix and `ψ` together.
    pub fn evaluate_word(&self, w: &Word) -> Result<(NormalizedElement, SymbolValue)> {
        let (m, psi) = psi_accumulate(w, &self.gens)?;
        Ok((NormalizedElement(m), SymbolValue(psi)))
    }

    /// `κ(a+d)/c - ψ - ¼ sign(c)` from a matrix and its `ψ`.
    pub fn symbol_from_parts(&self, m: &NormalizedElement, psi: &FieldElement) -> Result<SymbolValue> {
        let m = &m.0;
        if m.c().is_zero() {
            return Err(Error::TrivialDoubleCoset);
        }
        let trace = (m.a() + m.d()).try_div(m.c())?.scale(&self.kappa);
        let quarter = Rational::new(BigInt::from(m.c().sign()), BigInt::from(4));
        Ok(SymbolValue((&trace - psi).add_rational(&-quarter)))
    }

    /// Algorithm A: accumulate `ψ` along the word.
    pub fn symbol_from_word(&self, w: &Word) -> Result<SymbolValue> {
        let (m, psi) = self.evaluate_word(w)?;
        self.symbol_from_parts(&m, psi.value())
    }

    /// Algorithm A on a matrix, via its word.
    pub fn symbol_of_element(&self, m: &NormalizedElement) -> Result<SymbolValue> {
        let w = self
            .membership_normalized(m)?
            .ok_or_else(|| Error::NotInGroup(m.to_string()))?;
        self.symbol_from_word(&w)
    }

    /// `-round(d/c)` with halves rounded toward zero.
    fn nearest_shift(&self, row: &DoubleCosetRow) -> Result<i64> {
        let x = row.d.try_div(&row.c)?;
        let n = -x.round_half_to_zero();
        i64::try_from(n).map_err(|_| Error::NotInGroup(row.to_string()))
    }

    fn swap_row(&self, c: &FieldElement, d: &FieldElement) -> (FieldElement, FieldElement) {
        (d * &self.lambda, -&(c * &self.lambda_inv))
    }

    /// Translation to the nearest `d + nc`, then `ι′`-swap, until `d = 0`.
    pub fn rosen_reduce(&self, row: &DoubleCosetRow) -> Result<ReductionTrace> {
        self.check_field(&row.c)?;
        let mut steps = Vec::new();
        let mut rows = Vec::new();
        let mut c = row.c.clone();
        let mut d = row.d.clone();
        let mut swaps = 0;
        loop {
            if !d.is_zero() {
                let n = self.nearest_shift(&DoubleCosetRow {
                    c: c.clone(),
                    d: d.clone(),
                })?;
                if n != 0 {
                    d = &d + &c.scale_int(&BigInt::from(n));
                }
                steps.push(ReductionStep::Translate(n));
                rows.push(DoubleCosetRow {
                    c: c.clone(),
                    d: d.clone(),
                });
            }
            if d.is_zero() {
                if c != self.lambda && c != -&self.lambda {
                    return Err(Error::NotInGroup(format!("terminal row {c};0")));
                }
                return Ok(ReductionTrace {
                    start: row.clone(),
                    steps,
                    rows,
                });
            }
            swaps += 1;
            if swaps > REDUCTION_CAP {
                return Err(Error::IterationCap(REDUCTION_CAP));
            }
            let (nc, nd) = self.swap_row(&c, &d);
            c = nc;
            d = nd;
            steps.push(ReductionStep::Swap);
            rows.push(DoubleCosetRow {
                c: c.clone(),
                d: d.clone(),
            });
        }
    }

    /// Swap increment `κ(c²/λ² + 1 + d²)/(cd) - ¼ sign(cd)` for the row `(c, d)`,
    /// i.e. `𝒮(γ) - 𝒮(γι′)`.
    pub fn swap_increment(&self, c: &FieldElement, d: &FieldElement) -> Result<FieldElement> {
        let c_over = c * &self.lambda_inv;
        let num = (&c_over * &c_over + d * d).add_rational(&Rational::one());
        let cd = c * d;
        let quarter = Rational::new(BigInt::from(cd.sign()), BigInt::from(4));
        Ok(num.try_div(&cd)?.scale(&self.kappa).add_rational(&-quarter))
    }

    /// Algorithm B: replay the reduction, adding the three-term relation with
    /// `ι′` at each swap. Terminal rows have symbol 0.
    pub fn symbol_descent(&self, row: &DoubleCosetRow) -> Result<SymbolValue> {
        let trace = self.rosen_reduce(row)?;
        let mut total = FieldElement::zero(&self.field);
        let mut prev = &trace.start;
        for (step, next) in trace.steps.iter().zip(&trace.rows) {
            if *step == ReductionStep::Swap {
                total = &total + &self.swap_increment(&prev.c, &prev.d)?;
            }
            prev = next;
        }
        Ok(SymbolValue(total))
    }

    /// Word for a matrix in original coordinates, or `None` if it is not in `H_q`.
    pub fn membership(&self, m: &GroupElement) -> Result<Option<Word>> {
        self.check_field(m.a())?;
        let integral = m
            .entries()
            .iter()
            .all(|x| x.coords().iter().all(|r| r.is_integer()));
        if !integral {
            return Ok(None);
        }
        self.membership_normalized(&self.normalize(m)?)
    }

    /// Word `w` with `word_to_matrix(w) = m` exactly, or `None`.
    pub fn membership_normalized(&self, m: &NormalizedElement) -> Result<Option<Word>> {
        let g = &m.0;
        self.check_field(g.a())?;
        if g.c().is_zero() {
            return Ok(self.translation_word(g));
        }
        let trace = match self.rosen_reduce(&DoubleCosetRow::new(g.c().clone(), g.d().clone())?) {
            Ok(t) => t,
            Err(Error::NotInGroup(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        // m·P = T with P the product of the steps; T = ±τ′ᵏι′.
        let mut t = g.clone();
        for step in &trace.steps {
            t = match step {
                ReductionStep::Translate(n) => {
                    t.mul_translation(&FieldElement::from_int(&self.field, *n))
                }
                ReductionStep::Swap => t.mul(&self.gens.iota),
            };
        }
        // T·ι′⁻¹ = ±τ′ᵏ.
        let head = t.mul(&self.gens.iota.inverse());
        let Some(mut w) = self.translation_word(&head) else {
            return Ok(None);
        };
        w.push(Letter::iota(1));
        for step in trace.steps.iter().rev() {
            w.push(match step {
                ReductionStep::Translate(n) => Letter::tau(-n),
                ReductionStep::Swap => Letter::iota(-1),
            });
        }
        if self.word_to_matrix(&w).0 != *g {
            return Ok(None);
        }
        Ok(Some(w))
    }

    /// Word for `±τ′ᵏ`; `-I` is written `ι²`.
    fn translation_word(&self, g: &GroupElement) -> Option<Word> {
        let sign = if g.a().is_one() && g.d().is_one() {
            1
        } else if (-g.a()).is_one() && (-g.d()).is_one() {
            -1
        } else {
            return None;
        };
        if !g.c().is_zero() {
            return None;
        }
        let k = g.b().scale_int(&BigInt::from(sign)).to_integer()?;
        let k = i64::try_from(k).ok()?;
        let mut w = Word::new();
        w.push(Letter::tau(k));
        if sign < 0 {
            w.push(Letter::iota(2));
        }
        Some(w)
    }

    /// `𝒮(g) + 𝒮(h) - 𝒮(gh) - [κ(c_g²+c_h²+c_gh²)/(c_g c_h c_gh) - ¼ sign(c_g c_h c_gh)]`.
    pub fn three_term_residual(
        &self,
        g: &NormalizedElement,
        h: &NormalizedElement,
    ) -> Result<FieldElement> {
        let gh = g.mul(h);
        let (cg, ch, cgh) = (g.0.c(), h.0.c(), gh.0.c());
        if cg.is_zero() || ch.is_zero() || cgh.is_zero() {
            return Err(Error::TrivialDoubleCoset);
        }
        let lhs = &(self.symbol_of_element(g)?.0 + self.symbol_of_element(h)?.0)
            - &self.symbol_of_element(&gh)?.0;
        let prod = &(cg * ch) * cgh;
        let squares = &(cg * cg + ch * ch) + &(cgh * cgh);
        let quarter = Rational::new(BigInt::from(prod.sign()), BigInt::from(4));
        let rhs = squares.try_div(&prod)?.scale(&self.kappa).add_rational(&-quarter);
        Ok(&lhs - &rhs)
    }

    /// `𝒮(c,d) - 𝒮(λd, -c/λ) - [κ(c/λ·1/λ·c + 1 + d²)/(cd) - ¼ sign(cd)]`, each
    /// symbol from Algorithm A. At `q = 3` this is the classical reciprocity law.
    pub fn reciprocity_residual_hecke(&self, g: &NormalizedElement) -> Result<FieldElement> {
        let (c, d) = (g.0.c(), g.0.d());
        if c.is_zero() || d.is_zero() {
            return Err(Error::TrivialDoubleCoset);
        }
        let swapped = g.mul(&self.iota_normalized());
        let lhs = &self.symbol_of_element(g)?.0 - &self.symbol_of_element(&swapped)?.0;
        Ok(&lhs - &self.swap_increment(c, d)?)
    }

    pub fn rationality_report(&self, w: &Word) -> Result<RationalityReport> {
        let psi = self.psi_word(w)?.0;
        let coords = psi.coords();
        let support_in_span = coords.iter().skip(2).all(Zero::is_zero);
        let rs = |x: &FieldElement| (x.coord(0), x.coord(1));
        Ok(RationalityReport {
            psi_rs: rs(&psi),
            scaled_rs: rs(&(&psi * &self.lambda)),
            coords,
            support_in_span,
        })
    }
}

/// Word for the double-coset representative reached by reversing a reduction
/// trace from `ι′`: `ι′ · ∏ (step)⁻¹`.
pub fn row_to_word(trace: &ReductionTrace) -> Word {
    let mut w = Word::from_letters([Letter::iota(1)]);
    for step in trace.steps.iter().rev() {
        w.push(match step {
            ReductionStep::Translate(n) => Letter::tau(-n),
            ReductionStep::Swap => Letter::iota(-1),
        });
    }
    w
}
