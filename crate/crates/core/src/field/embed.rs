//! Certified real embedding `λ ↦ 2cos(π/q)`.
//!
//! `λ` is pinned between consecutive dyadic rationals `Λ/2^P ≤ λ < (Λ+1)/2^P`
//! by exact bisection on the minimal polynomial. Since `λ > 0` every power
//! `λ^i` then lies in `[Λ^i, (Λ+1)^i]/2^{Pi}`, and the value of an element is
//! enclosed by integer interval arithmetic. Precision doubles until the
//! enclosure excludes zero; an element is zero exactly when all its
//! coordinates are, so the refinement terminates.
//!
//! A double-precision filter with a rigorous error bound answers most sign
//! queries before any big-integer work.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use super::minpoly::sign_of;
use super::{FieldElement, LambdaField, MinimalPolynomial, Rational};
use crate::error::{Error, Result};

const BASE_BITS: u32 = 64;

pub(crate) struct PowerEnclosure {
    bits: u32,
    /// `Λ^i · 2^{P(n-1-i)}`
    lower: Vec<BigInt>,
    /// `(Λ+1)^i · 2^{P(n-1-i)}`
    upper: Vec<BigInt>,
}

impl PowerEnclosure {
    fn new(poly: &MinimalPolynomial, bits: u32, hint: Option<&PowerEnclosure>) -> Result<Self> {
        let (mut lo, mut hi) = match hint {
            Some(h) => {
                let shift = (bits - h.bits) as usize;
                let l = h.lower.get(1).cloned().unwrap_or_default() >> (h.bits as usize * (poly.degree() - 2));
                (l.clone() << shift, (l + 1u32) << shift)
            }
            None => initial_bracket(poly, bits)?,
        };
        while &hi - &lo > BigInt::one() {
            let mid: BigInt = (&lo + &hi) >> 1usize;
            if poly.sign_at_dyadic(&mid, bits) <= 0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let n = poly.degree();
        let mut lower = Vec::with_capacity(n);
        let mut upper = Vec::with_capacity(n);
        let (mut pl, mut pu) = (BigInt::one(), BigInt::one());
        for i in 0..n {
            let shift = bits as usize * (n - 1 - i);
            lower.push(&pl << shift);
            upper.push(&pu << shift);
            pl *= &lo;
            pu *= &hi;
        }
        Ok(PowerEnclosure { bits, lower, upper })
    }

    /// Integer bounds on `2^{P(n-1)} Σ m_i λ^i`.
    fn bounds(&self, num: &[BigInt]) -> (BigInt, BigInt) {
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for ((m, l), u) in num.iter().zip(&self.lower).zip(&self.upper) {
            if m.is_positive() {
                lo += m * l;
                hi += m * u;
            } else if m.is_negative() {
                lo += m * u;
                hi += m * l;
            }
        }
        (lo, hi)
    }

    fn scale_bits(&self, degree: usize) -> usize {
        self.bits as usize * (degree - 1)
    }
}

/// Dyadic bracket of width `≤ 2^{-30}` around `λ`, checked by a sign change.
///
/// The nearest other root is `2cos(3π/q)`, at distance `4 sin(2π/q) sin(π/q)`,
/// far wider than the bracket for any practical `q`.
fn initial_bracket(poly: &MinimalPolynomial, bits: u32) -> Result<(BigInt, BigInt)> {
    let approx = 2.0 * (PI / poly.q() as f64).cos();
    let eps = 2f64.powi(-32);
    let lo = Rational::from_f64(approx - eps).ok_or(Error::MinimalPolynomial(poly.q()))?;
    let hi = Rational::from_f64(approx + eps).ok_or(Error::MinimalPolynomial(poly.q()))?;
    if poly.sign_at(&lo) >= 0 || poly.sign_at(&hi) <= 0 {
        return Err(Error::MinimalPolynomial(poly.q()));
    }
    let scale = Rational::from_integer(BigInt::one() << bits as usize);
    Ok(((lo * &scale).floor().to_integer(), (hi * &scale).ceil().to_integer()))
}

/// Double-precision powers of `λ` with absolute error bounds.
pub(crate) struct FloatFilter {
    powers: Vec<f64>,
    errors: Vec<f64>,
}

impl FloatFilter {
    pub(crate) fn new(poly: &MinimalPolynomial) -> Result<Self> {
        let n = poly.degree();
        if n == 1 {
            return Ok(FloatFilter {
                powers: vec![1.0],
                errors: vec![0.0],
            });
        }
        let enc = PowerEnclosure::new(poly, BASE_BITS, None)?;
        let scale = Rational::from_integer(BigInt::one() << enc.scale_bits(n));
        let mut powers = Vec::with_capacity(n);
        let mut errors = Vec::with_capacity(n);
        for i in 0..n {
            let lo = Rational::new(enc.lower[i].clone(), scale.to_integer());
            let hi = Rational::new(enc.upper[i].clone(), scale.to_integer());
            let mid = ((&lo + &hi) / Rational::from_integer(2.into()))
                .to_f64()
                .unwrap_or(f64::NAN);
            let width = (&hi - &lo).to_f64().unwrap_or(f64::INFINITY);
            powers.push(mid);
            errors.push(width + mid.abs() * f64::EPSILON);
        }
        Ok(FloatFilter { powers, errors })
    }

    /// Sign of `Σ m_i λ^i` when double precision certifies it.
    fn sign(&self, num: &[BigInt]) -> Option<i8> {
        let mut sum = 0.0;
        let mut magnitude = 0.0;
        let mut err = 0.0;
        for ((m, p), e) in num.iter().zip(&self.powers).zip(&self.errors) {
            let mf = m.to_f64()?;
            if !mf.is_finite() {
                return None;
            }
            sum += mf * p;
            magnitude += (mf * p).abs();
            err += mf.abs() * (e + p.abs() * f64::EPSILON);
        }
        let n = num.len() as f64;
        let bound = 2.0 * (err + (n + 2.0) * f64::EPSILON * magnitude) + f64::MIN_POSITIVE;
        if !sum.is_finite() || !bound.is_finite() {
            return None;
        }
        if sum > bound {
            Some(1)
        } else if sum < -bound {
            Some(-1)
        } else {
            None
        }
    }
}

/// Closed rational interval containing an embedded value.
#[derive(Clone, Debug, PartialEq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl Enclosure {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> f64 {
        ((&self.lo + &self.hi) / Rational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }
}

impl LambdaField {
    fn enclosure(&self, level: usize) -> Arc<PowerEnclosure> {
        {
            let cache = self.enclosures.read().expect("enclosure cache poisoned");
            if let Some(e) = cache.get(level) {
                return e.clone();
            }
        }
        let mut cache = self.enclosures.write().expect("enclosure cache poisoned");
        while cache.len() <= level {
            let bits = BASE_BITS << cache.len();
            let hint = cache.last().map(|e| e.as_ref());
            // the bracket was validated when the field was built
            let hint = if self.degree() >= 2 { hint } else { None };
            let enc = PowerEnclosure::new(&self.poly, bits, hint)
                .expect("λ bracket validated at field construction");
            cache.push(Arc::new(enc));
        }
        cache[level].clone()
    }
}

impl FieldElement {
    /// Exact sign under the embedding `λ ↦ 2cos(π/q)`.
    pub fn sign(&self) -> i8 {
        if self.field.degree() == 1 {
            return sign_of(&self.num[0]);
        }
        if self.is_zero() {
            return 0;
        }
        if let Some(s) = self.field.filter.sign(&self.num) {
            return s;
        }
        let mut level = 0;
        loop {
            let enc = self.field.enclosure(level);
            let (lo, hi) = enc.bounds(&self.num);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            level += 1;
        }
    }

    pub fn abs(&self) -> FieldElement {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Compares embedded values.
    pub fn cmp_embedded(&self, other: &FieldElement) -> Ordering {
        match (self - other).sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    /// Sign of `self - r` for a rational `r`.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        match self.add_rational(&-r).sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    /// Interval of width `< 2^{1-bits}` containing the embedded value.
    pub fn to_float(&self, bits: u32) -> Enclosure {
        let bits = bits.max(53);
        if self.field.degree() == 1 || self.to_rational().is_some() {
            let v = self.coord(0);
            return Enclosure {
                lo: v.clone(),
                hi: v,
            };
        }
        let target = Rational::new(BigInt::one(), BigInt::one() << (bits as usize - 1));
        let mut level = 0;
        loop {
            let enc = self.field.enclosure(level);
            let (lo, hi) = enc.bounds(&self.num);
            let den = &self.den << enc.scale_bits(self.field.degree());
            let e = Enclosure {
                lo: Rational::new(lo, den.clone()),
                hi: Rational::new(hi, den),
            };
            if e.width() < target {
                return e;
            }
            level += 1;
        }
    }

    /// Double-precision value of the embedding.
    pub fn to_f64(&self) -> f64 {
        if let Some(r) = self.to_rational() {
            return r.to_f64().unwrap_or(f64::NAN);
        }
        let direct: f64 = self
            .num
            .iter()
            .zip(&self.field.filter.powers)
            .map(|(m, p)| m.to_f64().unwrap_or(f64::NAN) * p)
            .sum::<f64>()
            / self.den.to_f64().unwrap_or(f64::NAN);
        if direct.is_finite() {
            direct
        } else {
            self.to_float(64).midpoint()
        }
    }

    /// `⌊x⌋` of the embedded value, decided exactly.
    pub fn floor(&self) -> BigInt {
        if let Some(r) = self.to_rational() {
            return r.floor().to_integer();
        }
        let e = self.to_float(64);
        let k = e.hi.floor().to_integer();
        if self.cmp_rational(&Rational::from_integer(k.clone())) == Ordering::Less {
            k - 1
        } else {
            k
        }
    }

    /// Exact representative of the value modulo 1, in `[0, 1)`.
    pub fn fract(&self) -> FieldElement {
        let k = self.floor();
        self.add_rational(&Rational::from_integer(-k))
    }

    /// Nearest integer to the embedded value, ties toward zero.
    pub fn round_half_to_zero(&self) -> BigInt {
        let k = self.floor();
        let half = Rational::new(BigInt::one(), 2.into());
        let frac = self.add_rational(&Rational::from_integer(-k.clone()));
        match frac.cmp_rational(&half) {
            Ordering::Greater => k + 1,
            Ordering::Less => k,
            Ordering::Equal => {
                if k.is_negative() {
                    k + 1
                } else {
                    k
                }
            }
        }
    }
}
