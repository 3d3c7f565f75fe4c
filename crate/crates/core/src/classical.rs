//! Classical Dedekind sums, Rademacher's φ on `SL₂(ℤ)`, and the η-function
//! oracle for φ.

use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::Ratio;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::Rational;

/// Coprime pair `(a, c)` with `c > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoprimePair {
    a: BigInt,
    c: BigInt,
}

impl CoprimePair {
    pub fn new(a: impl Into<BigInt>, c: impl Into<BigInt>) -> Result<Self> {
        let (a, c) = (a.into(), c.into());
        if !c.is_positive() || !a.gcd(&c).is_one() {
            return Err(Error::NotCoprime {
                a: a.to_string(),
                c: c.to_string(),
            });
        }
        Ok(CoprimePair { a, c })
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }
}

/// Element `(a b; c d)` of `SL₂(ℤ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl IntegerMatrix {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let m = IntegerMatrix {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        };
        if !(&m.a * &m.d - &m.b * &m.c).is_one() {
            return Err(Error::DeterminantNotOne);
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Self::from_i64(1, 0, 0, 1)
    }

    /// `ι = (0 -1; 1 0)`
    pub fn iota() -> Self {
        Self::from_i64(0, -1, 1, 0)
    }

    /// `(1 n; 0 1)`
    pub fn translation(n: i64) -> Self {
        Self::from_i64(1, n, 0, 1)
    }

    /// Some matrix with first column `(a, c)`.
    pub fn from_column(a: impl Into<BigInt>, c: impl Into<BigInt>) -> Result<Self> {
        let (a, c) = (a.into(), c.into());
        let e = a.extended_gcd(&c);
        if !e.gcd.is_one() {
            return Err(Error::NotCoprime {
                a: a.to_string(),
                c: c.to_string(),
            });
        }
        // x·a + y·c = 1, so (a, -y; c, x) has determinant 1.
        IntegerMatrix::new(a, -e.y, c, e.x)
    }

    fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        IntegerMatrix {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn mul(&self, o: &IntegerMatrix) -> IntegerMatrix {
        IntegerMatrix {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn neg(&self) -> IntegerMatrix {
        IntegerMatrix {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    /// Möbius action on the upper half-plane.
    pub fn act(&self, z: Complex64) -> Complex64 {
        let [a, b, c, d] = self.to_f64();
        (z * a + b) / (z * c + d)
    }

    pub fn to_f64(&self) -> [f64; 4] {
        [&self.a, &self.b, &self.c, &self.d].map(|x| x.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}; {}, {})", self.a, self.b, self.c, self.d)
    }
}

fn sign(x: &BigInt) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Rational {
    Rational::new(n.into(), d.into())
}

/// `((x))`: zero on integers, `x - ⌊x⌋ - 1/2` elsewhere.
pub fn sawtooth(x: &Rational) -> Rational {
    if x.is_integer() {
        Rational::zero()
    } else {
        x - x.floor() - rat(1, 2)
    }
}

/// `2c·((n/c))` as an integer.
fn sawtooth_scaled(n: i128, c: i128) -> i128 {
    let r = n.rem_euclid(c);
    if r == 0 {
        0
    } else {
        2 * r - c
    }
}

/// `s(a, c) = Σ_{k=1}^{c-1} ((k/c))((ak/c))`, summed term by term.
pub fn dedekind_sum_naive(p: &CoprimePair) -> Rational {
    let c = p.c();
    if let (Some(a), Some(c)) = (p.a().to_i64(), c.to_i64()) {
        if c < (1 << 30) {
            let (a, c) = (a as i128, c as i128);
            let a = a.rem_euclid(c);
            let total: i128 = (1..c)
                .map(|k| sawtooth_scaled(k, c) * sawtooth_scaled(a * k, c))
                .sum();
            return rat(total, 4 * c * c);
        }
    }
    let mut total = Rational::zero();
    let mut k = BigInt::one();
    while &k < c {
        total += sawtooth(&rat(k.clone(), c.clone())) * sawtooth(&rat(p.a() * &k, c.clone()));
        k += 1;
    }
    total
}

/// `s(a, c)` in `O(log c)` steps: reduce `a` mod `c`, swap with the
/// reciprocity law, stop at `c = 1`.
pub fn dedekind_sum_fast(p: &CoprimePair) -> Rational {
    let mut c = p.c().clone();
    let mut a = p.a().mod_floor(&c);
    let mut negate = false;
    let mut acc = Rational::zero();
    // s(original) = acc ± s(a, c)
    while !c.is_one() && !a.is_zero() {
        // s(a,c) = -s(c,a) + (a² + c² + 1)/(12ac) - 1/4
        let term = rat(&a * &a + &c * &c + 1u32, 12u32 * &a * &c) - rat(1, 4);
        if negate {
            acc -= term;
        } else {
            acc += term;
        }
        negate = !negate;
        let r = c.mod_floor(&a);
        c = std::mem::replace(&mut a, r);
    }
    acc
}

/// `6c·s(a,c)`, which is always an integer, by the same descent in `i128`.
/// Requires `0 < c < 2^28`.
pub fn dedekind_sum_scaled(a: i64, c: i64) -> Result<i64> {
    if c <= 0 || c >= 1 << 28 || a.gcd(&c) != 1 {
        return Err(Error::NotCoprime {
            a: a.to_string(),
            c: c.to_string(),
        });
    }
    let c0 = c as i128;
    let (mut a, mut c) = ((a as i128).rem_euclid(c0), c0);
    let mut negate = false;
    let mut acc = Ratio::<i128>::zero();
    while c != 1 && a != 0 {
        let term = Ratio::new(a * a + c * c + 1, 12 * a * c) - Ratio::new(1, 4);
        if negate {
            acc -= term;
        } else {
            acc += term;
        }
        negate = !negate;
        let r = c.rem_euclid(a);
        c = std::mem::replace(&mut a, r);
    }
    let scaled = acc * Ratio::from_integer(6 * c0);
    debug_assert!(scaled.is_integer());
    Ok(scaled.to_integer() as i64)
}

/// Convenience wrapper for machine integers.
pub fn dedekind_sum(a: i64, c: i64) -> Result<Rational> {
    Ok(dedekind_sum_fast(&CoprimePair::new(a, c)?))
}

/// Rademacher's φ. For `c ≠ 0` this is `(a+d)/(12c) - sign(c) s(a, |c|)`.
///
/// For `c = 0` the value is `b/(12d)` when `d = 1` and `b/(12d) - 1/2` when
/// `d = -1`; the half accounts for `log(-1) = iπ` in the η transformation and
/// makes `φ(γ) - sign(c)/4` satisfy the sign-cocycle identity on all of `SL₂(ℤ)`.
pub fn rademacher_phi(m: &IntegerMatrix) -> Rational {
    if m.c.is_zero() {
        let base = rat(m.b.clone(), 12u32 * &m.d);
        return if m.d.is_negative() {
            base - rat(1, 2)
        } else {
            base
        };
    }
    let abs_c = m.c.abs();
    let s = dedekind_sum_fast(&CoprimePair {
        a: m.a.mod_floor(&abs_c),
        c: abs_c,
    });
    let s = if m.c.is_negative() { -s } else { s };
    rat(&m.a + &m.d, 12u32 * &m.c) - s
}

/// `ψ(γ) = φ(γ) - sign(c)/4`, with `sign(0) = 0`.
pub fn rademacher_psi(m: &IntegerMatrix) -> Rational {
    rademacher_phi(m) - rat(sign(&m.c), 4)
}

/// Number of product factors needed for `log η(z)` so the dropped tail is
/// below `1e-15`.
pub fn eta_terms(z: Complex64) -> usize {
    let r = (-2.0 * PI * z.im).exp();
    if r <= 0.0 {
        return 1;
    }
    // r^{N+1}/(1-r) < 1e-15
    let n = ((1e-15 * (1.0 - r)).ln() / r.ln()).ceil();
    n.max(1.0) as usize
}

/// `log η(z) = πiz/12 + Σ log(1 - e^{2πinz})`, the branch analytic on the
/// upper half-plane. At least `terms` factors are used, more if the tail
/// bound at `z` demands it.
pub fn log_eta(z: Complex64, terms: usize) -> Complex64 {
    let n_terms = terms.max(eta_terms(z));
    let i = Complex64::i();
    let mut acc = i * PI * z / 12.0;
    let mut tail = Complex64::zero();
    for n in 1..=n_terms {
        let qn = (i * 2.0 * PI * z * n as f64).exp();
        tail += (Complex64::one() - qn).ln();
    }
    acc += tail;
    acc
}

/// φ recovered numerically from the transformation law of `log η` at `z`.
///
/// For `c = 0` the square-root factor reduces to `d^{1/2}` with the principal
/// branch.
pub fn phi_via_eta(m: &IntegerMatrix, z: Complex64, terms: usize) -> f64 {
    let [_, _, c, d] = m.to_f64();
    let w = m.act(z);
    let i = Complex64::i();
    let half_log = if c == 0.0 {
        0.5 * Complex64::new(d, 0.0).ln()
    } else {
        0.5 * ((z * c + d) / (i * c.signum())).ln()
    };
    let diff = log_eta(w, terms) - log_eta(z, terms) - half_log;
    (diff / (i * PI)).re
}

/// Base point where both `z` and `γz` have imaginary part `1/|c|`, the best
/// possible for the η product. Falls back to `i` for `c = 0`.
pub fn eta_base_point(m: &IntegerMatrix) -> Complex64 {
    let [_, _, c, d] = m.to_f64();
    if c == 0.0 {
        Complex64::i()
    } else {
        Complex64::new(-d / c, 1.0 / c.abs())
    }
}

/// `s(a,c) + s(c,a) - [(a/c + 1/(ac) + c/a)/12 - 1/4]`; always zero.
pub fn reciprocity_residual(a: i64, c: i64) -> Result<Rational> {
    if a <= 0 {
        return Err(Error::NotCoprime {
            a: a.to_string(),
            c: c.to_string(),
        });
    }
    let lhs = dedekind_sum(a, c)? + dedekind_sum(c, a)?;
    let (a, c) = (BigInt::from(a), BigInt::from(c));
    let rhs = (rat(a.clone(), c.clone()) + rat(1, &a * &c) + rat(c, a)) / rat(12, 1) - rat(1, 4);
    Ok(lhs - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        rat(n, d)
    }

    fn pair(a: i64, c: i64) -> CoprimePair {
        CoprimePair::new(a, c).unwrap()
    }

    // Literal evaluation of the defining sum with exact rationals.
    fn literal_sum(a: i64, c: i64) -> Rational {
        (1..c)
            .map(|k| sawtooth(&r(k, c)) * sawtooth(&r(a * k, c)))
            .fold(Rational::zero(), |s, t| s + t)
    }

    #[test]
    fn sawtooth_values() {
        assert_eq!(sawtooth(&r(2, 1)), r(0, 1));
        assert_eq!(sawtooth(&r(1, 2)), r(0, 1));
        assert_eq!(sawtooth(&r(1, 3)), r(-1, 6));
        assert_eq!(sawtooth(&r(-1, 4)), r(1, 4));
    }

    #[test]
    fn naive_examples() {
        assert_eq!(dedekind_sum_naive(&pair(0, 1)), r(0, 1));
        assert_eq!(dedekind_sum_naive(&pair(1, 3)), r(1, 18));
        assert_eq!(dedekind_sum_naive(&pair(2, 5)), r(0, 1));
    }

    #[test]
    fn fast_examples() {
        assert_eq!(dedekind_sum_fast(&pair(1, 3)), r(1, 18));
        assert_eq!(dedekind_sum_fast(&pair(3, 1)), r(0, 1));
        assert_eq!(dedekind_sum_fast(&pair(0, 1)), r(0, 1));
    }

    #[test]
    fn naive_matches_literal_definition() {
        for c in 1..=40 {
            for a in -c..=2 * c {
                if a.gcd(&c) == 1 {
                    assert_eq!(dedekind_sum_naive(&pair(a, c)), literal_sum(a, c), "({a},{c})");
                }
            }
        }
    }

    #[test]
    fn big_integer_path_agrees() {
        // s(1, c) = (c-1)(c-2)/(12c)
        let big = BigInt::from(1u64 << 40) + 15u32;
        let c = Rational::from_integer(big.clone());
        let expected = (&c - r(1, 1)) * (&c - r(2, 1)) / (r(12, 1) * &c);
        let one = CoprimePair::new(BigInt::one(), big.clone()).unwrap();
        assert_eq!(dedekind_sum_fast(&one), expected);
        let minus = CoprimePair::new(-BigInt::one(), big).unwrap();
        assert_eq!(dedekind_sum_fast(&minus), -expected);
    }

    #[test]
    fn rejects_non_coprime() {
        assert!(CoprimePair::new(2, 4).is_err());
        assert!(CoprimePair::new(1, 0).is_err());
        assert!(CoprimePair::new(1, -3).is_err());
        assert!(dedekind_sum(6, 9).is_err());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(rademacher_phi(&IntegerMatrix::iota()), r(0, 1));
        assert_eq!(rademacher_phi(&IntegerMatrix::translation(1)), r(1, 12));
        let m = IntegerMatrix::new(1, 0, 3, 1).unwrap();
        assert_eq!(rademacher_phi(&m), r(0, 1));
        assert_eq!(rademacher_phi(&IntegerMatrix::identity()), r(0, 1));
        assert_eq!(rademacher_phi(&IntegerMatrix::identity().neg()), r(-1, 2));
        assert_eq!(rademacher_psi(&IntegerMatrix::iota()), r(-1, 4));
        assert!(IntegerMatrix::new(1, 1, 1, 1).is_err());
    }

    #[test]
    fn eta_oracle_examples() {
        let z = Complex64::i();
        assert!(phi_via_eta(&IntegerMatrix::iota(), z, 64).abs() < 1e-10);
        assert!((phi_via_eta(&IntegerMatrix::translation(1), z, 64) - 1.0 / 12.0).abs() < 1e-10);
        let m = IntegerMatrix::new(1, 0, 3, 1).unwrap();
        assert!(phi_via_eta(&m, z, 64).abs() < 1e-10);
        // c = 0, d = -1 lands on the same branch as the exact value
        let minus_t = IntegerMatrix::translation(5).neg();
        let exact = rademacher_phi(&minus_t).to_f64().unwrap();
        assert!((phi_via_eta(&minus_t, z, 64) - exact).abs() < 1e-10);
    }

    #[test]
    fn eta_oracle_off_base_points() {
        let m = IntegerMatrix::new(17, 5, 10, 3).unwrap();
        let exact = rademacher_phi(&m).to_f64().unwrap();
        for z in [Complex64::i(), eta_base_point(&m), Complex64::new(0.3, 0.8)] {
            assert!((phi_via_eta(&m, z, 64) - exact).abs() < 1e-9, "z={z}");
        }
    }

    #[test]
    fn reciprocity_examples() {
        assert_eq!(reciprocity_residual(1, 2).unwrap(), r(0, 1));
        assert_eq!(reciprocity_residual(1, 3).unwrap(), r(0, 1));
        assert!(reciprocity_residual(2, 4).is_err());
    }

    #[test]
    fn symbol_identity_for_positive_c() {
        // (a+d)/(12c) - φ(γ) = s(a,c)
        for (a, b, c, d) in [(1, 0, 3, 1), (2, 1, 5, 3), (-3, -1, 7, 2), (5, 2, 7, 3)] {
            let m = IntegerMatrix::new(a, b, c, d).unwrap();
            let lhs = r(a + d, 12 * c) - rademacher_phi(&m);
            assert_eq!(lhs, dedekind_sum(a, c).unwrap());
        }
    }

    proptest! {
        #[test]
        fn periodicity_oddness_integrality(c in 1i64..400, a0 in -2000i64..2000) {
            prop_assume!(a0.gcd(&c) == 1);
            let s = dedekind_sum(a0, c).unwrap();
            prop_assert_eq!(&s, &dedekind_sum(a0 + c, c).unwrap());
            prop_assert_eq!(-s.clone(), dedekind_sum(-a0, c).unwrap());
            prop_assert!((s * r(6 * c, 1)).is_integer());
        }

        #[test]
        fn fast_equals_naive(c in 1i64..300, a0 in -600i64..600) {
            prop_assume!(a0.gcd(&c) == 1);
            let p = pair(a0, c);
            prop_assert_eq!(dedekind_sum_fast(&p), dedekind_sum_naive(&p));
        }

        #[test]
        fn scaled_matches_fast(c in 1i64..(1 << 27), a0 in -(1i64 << 40)..(1i64 << 40)) {
            prop_assume!(a0.gcd(&c) == 1);
            let s = dedekind_sum_fast(&pair(a0, c));
            prop_assert_eq!(r(dedekind_sum_scaled(a0, c).unwrap(), 6 * c), s);
        }
    }
}
