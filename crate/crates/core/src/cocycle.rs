//! The sign 2-cocycle `ω` on `SL₂(ℝ)` and accumulation of `ψ` along products.
//!
//! `ω(g,h)` is the branch defect `(1/2πi)(log j(g,hz) + log j(h,z) - log j(gh,z))`
//! of the automorphy factor `j(g,z) = cz + d`. It is computed exactly from the
//! signs of `c(-d)`, which is `c` when `c ≠ 0` and `-d` otherwise.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;

use crate::classical::IntegerMatrix;
use crate::error::{Error, Result};
use crate::field::{FieldElement, LambdaField, Rational};
use crate::word::{Generator, Word};

/// 2×2 matrix of determinant 1 over `ℚ(λ_q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
    d: FieldElement,
}

impl GroupElement {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Result<Self> {
        let det = a.try_mul(&d)?.try_sub(&b.try_mul(&c)?)?;
        if !det.is_one() {
            return Err(Error::DeterminantNotOne);
        }
        Ok(GroupElement { a, b, c, d })
    }

    /// Skips the determinant check; callers guarantee `ad - bc = 1`.
    pub(crate) fn from_entries_unchecked(
        a: FieldElement,
        b: FieldElement,
        c: FieldElement,
        d: FieldElement,
    ) -> Self {
        debug_assert!((&(&a * &d) - &(&b * &c)).is_one());
        GroupElement { a, b, c, d }
    }

    pub fn identity(field: &Arc<LambdaField>) -> Self {
        let (zero, one) = (FieldElement::zero(field), FieldElement::one(field));
        GroupElement {
            a: one.clone(),
            b: zero.clone(),
            c: zero,
            d: one,
        }
    }

    pub fn from_integer_matrix(field: &Arc<LambdaField>, m: &IntegerMatrix) -> Self {
        let f = |x: &BigInt| FieldElement::from_integer(field, x.clone());
        GroupElement {
            a: f(&m.a),
            b: f(&m.b),
            c: f(&m.c),
            d: f(&m.d),
        }
    }

    pub fn a(&self) -> &FieldElement {
        &self.a
    }
    pub fn b(&self) -> &FieldElement {
        &self.b
    }
    pub fn c(&self) -> &FieldElement {
        &self.c
    }
    pub fn d(&self) -> &FieldElement {
        &self.d
    }

    pub fn field(&self) -> &Arc<LambdaField> {
        self.a.field()
    }

    pub fn q(&self) -> u32 {
        self.a.q()
    }

    pub fn try_mul(&self, o: &GroupElement) -> Result<GroupElement> {
        if self.q() != o.q() {
            return Err(Error::FieldMismatch {
                left: self.q(),
                right: o.q(),
            });
        }
        Ok(self.mul(o))
    }

    /// Panics on mismatched fields; see [`GroupElement::try_mul`].
    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        GroupElement {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    /// Right multiplication by the unipotent `(1 t; 0 1)`.
    pub fn mul_translation(&self, t: &FieldElement) -> GroupElement {
        GroupElement {
            a: self.a.clone(),
            b: &self.b + &(&self.a * t),
            c: self.c.clone(),
            d: &self.d + &(&self.c * t),
        }
    }

    pub fn neg(&self) -> GroupElement {
        GroupElement {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn transpose(&self) -> GroupElement {
        GroupElement {
            a: self.a.clone(),
            b: self.c.clone(),
            c: self.b.clone(),
            d: self.d.clone(),
        }
    }

    pub fn entries(&self) -> [&FieldElement; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// `j(g, z) = cz + d` in the real embedding.
    pub fn automorphy(&self, z: Complex64) -> Complex64 {
        if self.c.is_zero() {
            return Complex64::new(self.d.to_f64(), 0.0);
        }
        z * self.c.to_f64() + self.d.to_f64()
    }

    pub fn act(&self, z: Complex64) -> Complex64 {
        (z * self.a.to_f64() + self.b.to_f64()) / self.automorphy(z)
    }

    /// Parses `a,b,c,d` with each entry in field-element text form.
    pub fn parse(field: &Arc<LambdaField>, input: &str) -> Result<GroupElement> {
        let mut entries = Vec::with_capacity(4);
        let mut offset = 0;
        for part in input.split(',') {
            let entry = FieldElement::parse(field, part).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse {
                    pos: pos + offset,
                    msg,
                },
                other => other,
            })?;
            entries.push(entry);
            offset += part.len() + 1;
        }
        if entries.len() != 4 {
            return Err(Error::parse(
                input.len(),
                format!("expected 4 comma-separated entries, found {}", entries.len()),
            ));
        }
        let d = entries.pop().expect("4 entries");
        let c = entries.pop().expect("4 entries");
        let b = entries.pop().expect("4 entries");
        let a = entries.pop().expect("4 entries");
        GroupElement::new(a, b, c, d)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.a, self.b, self.c, self.d)
    }
}

/// Rational number with denominator dividing 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuarterInteger(i64);

impl QuarterInteger {
    pub fn from_quarters(quarters: i64) -> Self {
        QuarterInteger(quarters)
    }

    pub fn quarters(self) -> i64 {
        self.0
    }

    pub fn to_rational(self) -> Rational {
        Rational::new(self.0.into(), 4.into())
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 4.0
    }

    pub fn in_cocycle_range(self) -> bool {
        (-4..=4).contains(&self.0) && self.0 % 2 == 0
    }
}

impl fmt::Display for QuarterInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.to_rational();
        if r.is_integer() {
            write!(f, "{}", r.numer())
        } else {
            write!(f, "{}/{}", r.numer(), r.denom())
        }
    }
}

/// `c` if `c ≠ 0`, else `-d`.
pub fn c_of_minus_d(g: &GroupElement) -> FieldElement {
    if g.c.is_zero() {
        -&g.d
    } else {
        g.c.clone()
    }
}

fn c_of_minus_d_sign(g: &GroupElement) -> i64 {
    if g.c.is_zero() {
        -i64::from(g.d.sign())
    } else {
        i64::from(g.c.sign())
    }
}

fn omega_from_signs(x: i64, y: i64, z: i64) -> Result<QuarterInteger> {
    let w = QuarterInteger(x + y - z - x * y * z);
    if !w.in_cocycle_range() {
        return Err(Error::OmegaOutOfRange(w.to_string()));
    }
    Ok(w)
}

/// `ω(g,h) = ¼{s(g) + s(h) - s(gh) - s(g)s(h)s(gh)}` with `s = sign∘c(-d)`.
pub fn omega(g: &GroupElement, h: &GroupElement) -> Result<QuarterInteger> {
    let gh = g.try_mul(h)?;
    omega_from_signs(
        c_of_minus_d_sign(g),
        c_of_minus_d_sign(h),
        c_of_minus_d_sign(&gh),
    )
}

/// ω when the product is already known.
pub fn omega_with_product(
    g: &GroupElement,
    h: &GroupElement,
    gh: &GroupElement,
) -> Result<QuarterInteger> {
    omega_from_signs(
        c_of_minus_d_sign(g),
        c_of_minus_d_sign(h),
        c_of_minus_d_sign(gh),
    )
}

/// `(1/2πi)(log j(g,hz) + log j(h,z) - log j(gh,z))` with principal logarithms.
pub fn omega_analytic(g: &GroupElement, h: &GroupElement, z: Complex64) -> Result<f64> {
    let gh = g.try_mul(h)?;
    let defect = g.automorphy(h.act(z)).ln() + h.automorphy(z).ln() - gh.automorphy(z).ln();
    Ok((defect / (Complex64::i() * 2.0 * PI)).re)
}

/// Running product together with its `ψ` value.
#[derive(Clone, Debug)]
pub struct PsiAccumulator {
    element: GroupElement,
    psi: FieldElement,
}

impl PsiAccumulator {
    pub fn new(field: &Arc<LambdaField>) -> Self {
        PsiAccumulator {
            element: GroupElement::identity(field),
            psi: FieldElement::zero(field),
        }
    }

    pub fn from_parts(element: GroupElement, psi: FieldElement) -> Self {
        PsiAccumulator { element, psi }
    }

    /// `ψ(p·g) = ψ(p) + ψ(g) + ω(p, g)`.
    pub fn push(&mut self, g: &GroupElement, psi_g: &FieldElement) -> Result<()> {
        let next = self.element.try_mul(g)?;
        let w = omega_with_product(&self.element, g, &next)?;
        self.psi = self.psi.try_add(psi_g)?.add_rational(&w.to_rational());
        self.element = next;
        Ok(())
    }

    pub fn element(&self) -> &GroupElement {
        &self.element
    }

    pub fn psi(&self) -> &FieldElement {
        &self.psi
    }

    pub fn into_parts(self) -> (GroupElement, FieldElement) {
        (self.element, self.psi)
    }
}

/// Matrices and `ψ` values of the two generators. `tau` is unipotent, and
/// `ψ(τⁿ) = n·ψ(τ)` since `ω` vanishes on pairs of positive translations.
#[derive(Clone, Debug)]
pub struct GeneratorValues {
    pub iota: GroupElement,
    pub psi_iota: FieldElement,
    pub tau: GroupElement,
    pub psi_tau: FieldElement,
}

impl GeneratorValues {
    fn tau_power(&self, n: i64) -> GroupElement {
        let field = self.tau.field();
        let t = self.tau.b.scale_int(&BigInt::from(n));
        GroupElement::identity(field).mul_translation(&t)
    }
}

/// `ψ` of the product of `word`, accumulated left to right. An `ι^e` letter
/// contributes `e mod 4` copies of `ι`.
pub fn psi_accumulate(word: &Word, gens: &GeneratorValues) -> Result<(GroupElement, FieldElement)> {
    let mut acc = PsiAccumulator::new(gens.iota.field());
    for letter in word.letters() {
        match letter.generator {
            Generator::Iota => {
                for _ in 0..letter.exponent.rem_euclid(4) {
                    acc.push(&gens.iota, &gens.psi_iota)?;
                }
            }
            Generator::Tau => {
                let t = gens.tau_power(letter.exponent);
                let psi = gens.psi_tau.scale_int(&BigInt::from(letter.exponent));
                acc.push(&t, &psi)?;
            }
        }
    }
    Ok(acc.into_parts())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::rademacher_psi;

    fn q3() -> Arc<LambdaField> {
        LambdaField::get(3).unwrap()
    }

    fn m(a: i64, b: i64, c: i64, d: i64) -> GroupElement {
        GroupElement::from_integer_matrix(&q3(), &IntegerMatrix::new(a, b, c, d).unwrap())
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn classical_gens() -> GeneratorValues {
        let f = q3();
        GeneratorValues {
            iota: m(0, -1, 1, 0),
            psi_iota: FieldElement::from_rational(&f, &r(-1, 4)),
            tau: m(1, 1, 0, 1),
            psi_tau: FieldElement::from_rational(&f, &r(1, 12)),
        }
    }

    #[test]
    fn c_of_minus_d_examples() {
        let f = q3();
        assert_eq!(c_of_minus_d(&m(1, 0, 0, 1)), FieldElement::from_int(&f, -1));
        assert_eq!(c_of_minus_d(&m(0, -1, 1, 0)), FieldElement::from_int(&f, 1));
        assert_eq!(c_of_minus_d(&m(-1, 0, 0, -1)), FieldElement::from_int(&f, 1));
    }

    #[test]
    fn omega_examples() {
        let id = m(1, 0, 0, 1);
        let minus = m(-1, 0, 0, -1);
        let iota = m(0, -1, 1, 0);
        assert_eq!(omega(&id, &id).unwrap(), QuarterInteger(0));
        assert_eq!(omega(&minus, &minus).unwrap(), QuarterInteger(4));
        assert_eq!(omega(&iota, &iota).unwrap(), QuarterInteger(0));
        assert_eq!(omega(&minus, &minus).unwrap().to_string(), "1");
    }

    #[test]
    fn omega_analytic_examples() {
        let id = m(1, 0, 0, 1);
        let iota = m(0, -1, 1, 0);
        let minus = m(-1, 0, 0, -1);
        let z = Complex64::i();
        assert!(omega_analytic(&id, &id, z).unwrap().abs() < 1e-12);
        assert!(omega_analytic(&iota, &iota, z).unwrap().abs() < 1e-10);
        assert!((omega_analytic(&minus, &minus, z).unwrap() - 1.0).abs() < 1e-10);
        let g = m(2, 1, 5, 3);
        let h = m(-3, -1, 7, 2);
        let exact = omega(&g, &h).unwrap().to_f64();
        for z in [Complex64::i(), Complex64::new(1.0, 2.0), Complex64::new(-0.4, 0.1)] {
            assert!((omega_analytic(&g, &h, z).unwrap() - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn psi_of_small_words() {
        let gens = classical_gens();
        let f = q3();
        let (e, psi) = psi_accumulate(&Word::new(), &gens).unwrap();
        assert_eq!(e, m(1, 0, 0, 1));
        assert!(psi.is_zero());
        let (_, psi) = psi_accumulate(&Word::parse("i").unwrap(), &gens).unwrap();
        assert_eq!(psi, FieldElement::from_rational(&f, &r(-1, 4)));
        let (e, psi) = psi_accumulate(&Word::parse("i,i").unwrap(), &gens).unwrap();
        assert_eq!(e, m(-1, 0, 0, -1));
        assert_eq!(psi, FieldElement::from_rational(&f, &r(-1, 2)));
        let (e, psi) = psi_accumulate(&Word::parse("i^4").unwrap(), &gens).unwrap();
        assert_eq!(e, m(1, 0, 0, 1));
        assert!(psi.is_zero());
    }

    #[test]
    fn accumulated_psi_matches_rademacher() {
        let gens = classical_gens();
        for text in ["i,t^-3,i^-1", "t^5,i,t^2,i,t^-7", "i,t,i,t,i,t", "t^3,i^3,t^-2,i^2"] {
            let w = Word::parse(text).unwrap();
            let (e, psi) = psi_accumulate(&w, &gens).unwrap();
            let [a, b, c, d] = e.entries().map(|x| x.to_integer().unwrap());
            let im = IntegerMatrix::new(a, b, c, d).unwrap();
            assert_eq!(psi.to_rational().unwrap(), rademacher_psi(&im), "{text}");
        }
    }

    #[test]
    fn parse_matrix() {
        let f = LambdaField::get(5).unwrap();
        let g = GroupElement::parse(&f, "0,-1,1,0").unwrap();
        assert_eq!(g.to_string(), "0,-1,1,0");
        let t = GroupElement::parse(&f, "1,L,0,1").unwrap();
        assert_eq!(t.b(), &FieldElement::lambda(&f));
        assert_eq!(GroupElement::parse(&f, "1,1,1,1"), Err(Error::DeterminantNotOne));
        assert!(matches!(
            GroupElement::parse(&f, "1,0,0"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            GroupElement::parse(&f, "1,0,y,1"),
            Err(Error::Parse { pos: 4, .. })
        ));
    }
}
