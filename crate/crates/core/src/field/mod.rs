//! Exact arithmetic in the totally real field `ℚ(λ_q)`, `λ_q = 2cos(π/q)`.
//!
//! Elements are stored in the power basis `1, λ, …, λ^{n-1}` as an integer
//! numerator vector over a common positive denominator. Signs and real values
//! always refer to the embedding `λ ↦ 2cos(π/q)`.

mod embed;
mod minpoly;
mod text;

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use embed::Enclosure;
pub use text::{format_rational, parse_rational};
pub use minpoly::{minimal_poly, totient, MinimalPolynomial};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// The number field `ℚ(λ_q)` together with its reduction table and cached
/// enclosures of `λ_q`.
pub struct LambdaField {
    poly: MinimalPolynomial,
    /// `reductions[k]` expresses `λ^{n+k}` in the power basis.
    reductions: Vec<Vec<BigInt>>,
    enclosures: RwLock<Vec<Arc<embed::PowerEnclosure>>>,
    filter: embed::FloatFilter,
}

impl fmt::Debug for LambdaField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LambdaField")
            .field("q", &self.q())
            .field("degree", &self.degree())
            .finish()
    }
}

static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<LambdaField>>>> = OnceLock::new();

impl LambdaField {
    /// Shared field instance for `q`; repeated calls return the same `Arc`.
    pub fn get(q: i64) -> Result<Arc<LambdaField>> {
        if q < 3 {
            return Err(Error::InvalidQ(q));
        }
        let key = u32::try_from(q).map_err(|_| Error::InvalidQ(q))?;
        let cache = FIELDS.get_or_init(Default::default);
        if let Some(f) = cache.lock().expect("field cache poisoned").get(&key) {
            return Ok(f.clone());
        }
        let field = Arc::new(Self::build(minimal_poly(q)?)?);
        Ok(cache
            .lock()
            .expect("field cache poisoned")
            .entry(key)
            .or_insert(field)
            .clone())
    }

    fn build(poly: MinimalPolynomial) -> Result<Self> {
        let n = poly.degree();
        let coeffs = poly.integer_coefficients();
        let mut reductions: Vec<Vec<BigInt>> = Vec::with_capacity(n.saturating_sub(1));
        // λ^n = -Σ a_i λ^i
        let mut cur: Vec<BigInt> = coeffs[..n].iter().map(|c| -c).collect();
        for _ in 0..n.saturating_sub(1).max(1) {
            reductions.push(cur.clone());
            // multiply by λ and reduce the overflow coefficient
            let top = cur.pop().unwrap_or_default();
            cur.insert(0, BigInt::zero());
            for (c, r) in cur.iter_mut().zip(&reductions[0]) {
                *c += &top * r;
            }
        }
        let filter = embed::FloatFilter::new(&poly)?;
        let field = LambdaField {
            poly,
            reductions,
            enclosures: RwLock::new(Vec::new()),
            filter,
        };
        Ok(field)
    }

    pub fn q(&self) -> u32 {
        self.poly.q()
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn minimal_polynomial(&self) -> &MinimalPolynomial {
        &self.poly
    }
}

/// Element of `ℚ(λ_q)`.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<LambdaField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl FieldElement {
    fn from_parts(field: Arc<LambdaField>, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut x = FieldElement { field, num, den };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            self.num.iter_mut().for_each(|c| *c = -std::mem::take(c));
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let g = self
            .num
            .iter()
            .fold(self.den.clone(), |g, c| if g.is_one() { g } else { g.gcd(c) });
        if !g.is_one() {
            self.den /= &g;
            self.num.iter_mut().for_each(|c| *c /= &g);
        }
    }

    pub fn zero(field: &Arc<LambdaField>) -> Self {
        FieldElement {
            field: field.clone(),
            num: vec![BigInt::zero(); field.degree()],
            den: BigInt::one(),
        }
    }

    pub fn one(field: &Arc<LambdaField>) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &Arc<LambdaField>, v: i64) -> Self {
        Self::from_integer(field, BigInt::from(v))
    }

    pub fn from_integer(field: &Arc<LambdaField>, v: BigInt) -> Self {
        let mut x = Self::zero(field);
        x.num[0] = v;
        x
    }

    pub fn from_rational(field: &Arc<LambdaField>, r: &Rational) -> Self {
        let mut num = vec![BigInt::zero(); field.degree()];
        num[0] = r.numer().clone();
        FieldElement {
            field: field.clone(),
            num,
            den: r.denom().clone(),
        }
    }

    /// The generator `λ_q`.
    pub fn lambda(field: &Arc<LambdaField>) -> Self {
        if field.degree() == 1 {
            // λ_3 = 1
            return Self::from_integer(field, -field.poly.integer_coefficients()[0].clone());
        }
        let mut x = Self::zero(field);
        x.num[1] = BigInt::one();
        x
    }

    /// Builds an element from power-basis coordinates; missing trailing
    /// coordinates are zero, and longer inputs are reduced.
    pub fn from_coords(field: &Arc<LambdaField>, coords: &[Rational]) -> Self {
        let den = coords
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let wide: Vec<BigInt> = coords
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::from_parts(field.clone(), field.reduce(wide), den)
    }

    pub fn field(&self) -> &Arc<LambdaField> {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// Power-basis coordinates.
    pub fn coords(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|c| Rational::new(c.clone(), self.den.clone()))
            .collect()
    }

    /// Coordinate of `λ^i`; zero at and beyond the degree.
    pub fn coord(&self, i: usize) -> Rational {
        match self.num.get(i) {
            Some(c) => Rational::new(c.clone(), self.den.clone()),
            None => Rational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// Some(r) when the element lies in ℚ.
    pub fn to_rational(&self) -> Option<Rational> {
        self.num[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coord(0))
    }

    /// Some(n) when the element is a rational integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        (self.den.is_one() && self.num[1..].iter().all(Zero::is_zero)).then(|| self.num[0].clone())
    }

    fn check_same(&self, other: &FieldElement) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.q() == other.q() {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.q(),
                right: other.q(),
            })
        }
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same(other)?;
        Ok(self.combine(other, false))
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same(other)?;
        Ok(self.combine(other, true))
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same(other)?;
        Ok(self.product(other))
    }

    pub fn try_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same(other)?;
        Ok(self.product(&other.inv()?))
    }

    fn combine(&self, other: &FieldElement, subtract: bool) -> FieldElement {
        let (num, den) = if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| if subtract { a - b } else { a + b })
                .collect();
            (num, self.den.clone())
        } else {
            let l = self.den.lcm(&other.den);
            let (ma, mb) = (&l / &self.den, &l / &other.den);
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| {
                    let (x, y) = (a * &ma, b * &mb);
                    if subtract {
                        x - y
                    } else {
                        x + y
                    }
                })
                .collect();
            (num, l)
        };
        Self::from_parts(self.field.clone(), num, den)
    }

    fn product(&self, other: &FieldElement) -> FieldElement {
        let n = self.field.degree();
        let mut wide = vec![BigInt::zero(); 2 * n - 1];
        for (i, a) in self.num.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    wide[i + j] += a * b;
                }
            }
        }
        Self::from_parts(
            self.field.clone(),
            self.field.reduce(wide),
            &self.den * &other.den,
        )
    }

    /// Multiplicative inverse, by solving `x·y = 1` in the power basis.
    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.field.degree();
        if n == 1 {
            return Ok(Self::from_parts(
                self.field.clone(),
                vec![self.den.clone()],
                self.num[0].clone(),
            ));
        }
        // column j of the multiplication matrix is x·λ^j (numerators only)
        let mut col = FieldElement {
            field: self.field.clone(),
            num: self.num.clone(),
            den: BigInt::one(),
        };
        let mut cols = Vec::with_capacity(n);
        for _ in 0..n {
            let next = col.mul_lambda();
            cols.push(std::mem::replace(&mut col, next).num);
        }
        let mut m: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut row: Vec<Rational> = (0..n)
                    .map(|j| Rational::from_integer(cols[j][i].clone()))
                    .collect();
                row.push(if i == 0 { Rational::one() } else { Rational::zero() });
                row
            })
            .collect();
        let sol = solve(&mut m).ok_or(Error::DivisionByZero)?;
        // y = den · (M⁻¹ e_0)
        let den = Rational::from_integer(self.den.clone());
        let coords: Vec<Rational> = sol.into_iter().map(|s| s * &den).collect();
        Ok(Self::from_coords(&self.field, &coords))
    }

    pub fn scale(&self, r: &Rational) -> FieldElement {
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        Self::from_parts(self.field.clone(), num, &self.den * r.denom())
    }

    pub fn scale_int(&self, k: &BigInt) -> FieldElement {
        let num = self.num.iter().map(|c| c * k).collect();
        Self::from_parts(self.field.clone(), num, self.den.clone())
    }

    pub fn add_rational(&self, r: &Rational) -> FieldElement {
        self.combine(&Self::from_rational(&self.field, r), false)
    }

    /// Multiplication by `λ`, a shift followed by one reduction.
    pub fn mul_lambda(&self) -> FieldElement {
        let n = self.field.degree();
        if n == 1 {
            return self.clone();
        }
        let mut wide = Vec::with_capacity(n + 1);
        wide.push(BigInt::zero());
        wide.extend(self.num.iter().cloned());
        Self::from_parts(self.field.clone(), self.field.reduce(wide), self.den.clone())
    }
}

impl LambdaField {
    /// Reduces a coefficient vector of any length modulo the minimal polynomial.
    fn reduce(&self, mut wide: Vec<BigInt>) -> Vec<BigInt> {
        let n = self.degree();
        if wide.len() <= n {
            wide.resize(n, BigInt::zero());
            return wide;
        }
        // fold high powers from the top down so every reduction row is used once
        while wide.len() > n {
            let k = wide.len() - 1;
            let top = wide.pop().unwrap_or_default();
            if top.is_zero() {
                continue;
            }
            if k - n < self.reductions.len() {
                for (c, r) in wide.iter_mut().zip(&self.reductions[k - n]) {
                    *c += &top * r;
                }
            } else {
                // λ^k = λ^{k-n} · λ^n
                let shift = k - n;
                for (i, r) in self.reductions[0].iter().enumerate() {
                    wide[shift + i] += &top * r;
                }
            }
        }
        wide
    }
}

fn solve(m: &mut [Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let (src, dst) = if r < col {
                    let (lo, hi) = m.split_at_mut(col);
                    (&hi[0], &mut lo[r])
                } else {
                    let (lo, hi) = m.split_at_mut(r);
                    (&lo[col], &mut hi[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d -= &f * s;
                }
            }
        }
    }
    Some(m.iter().map(|row| row[n].clone()).collect())
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.q() == other.q() && self.den == other.den && self.num == other.num
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.q().hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (q={})", self, self.q())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            /// Panics if the operands live in different fields.
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$try(rhs).expect("field mismatch")
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(mut self) -> FieldElement {
        self.num.iter_mut().for_each(|c| *c = -std::mem::take(c));
        self
    }
}
