//! Minimal polynomial of `λ_q = 2cos(π/q)` over the rationals.
//!
//! `λ_q` is `ζ + ζ⁻¹` for a primitive `2q`-th root of unity `ζ`. The
//! cyclotomic polynomial `Φ_{2q}` is palindromic of degree `2m`, so
//! `z^{-m} Φ_{2q}(z)` is a polynomial in `x = z + 1/z`; rewriting each
//! `z^k + z^{-k}` through the Chebyshev-type recurrence `D_k = x D_{k-1} - D_{k-2}`
//! yields the minimal polynomial of `λ_q` with integer coefficients.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Monic integer polynomial with root `2cos(π/q)`, coefficients from the
/// constant term upwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalPolynomial {
    q: u32,
    coeffs: Vec<BigInt>,
}

impl MinimalPolynomial {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Integer coefficients, constant term first. The last entry is 1.
    pub fn integer_coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coefficients(&self) -> Vec<Rational> {
        self.coeffs
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Sign of `2^{bits·deg} f(m / 2^bits)`, evaluated exactly.
    pub(crate) fn sign_at_dyadic(&self, m: &BigInt, bits: u32) -> i8 {
        let deg = self.degree();
        let mut acc = self.coeffs[deg].clone();
        for i in (0..deg).rev() {
            let shift = bits as usize * (deg - i);
            acc = acc * m + (&self.coeffs[i] << shift);
        }
        sign_of(&acc)
    }

    /// Sign of `f(r)` at a rational point.
    pub(crate) fn sign_at(&self, r: &Rational) -> i8 {
        // den^deg · f(num/den) = Σ a_i num^i den^{deg-i}
        let deg = self.degree();
        let (num, den) = (r.numer(), r.denom());
        let mut acc = self.coeffs[deg].clone();
        let mut den_pow = BigInt::one();
        for i in (0..deg).rev() {
            den_pow *= den;
            acc = acc * num + &self.coeffs[i] * &den_pow;
        }
        sign_of(&acc)
    }
}

pub(crate) fn sign_of(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Computes the minimal polynomial of `2cos(π/q)`.
pub fn minimal_poly(q: i64) -> Result<MinimalPolynomial> {
    if q < 3 {
        return Err(Error::InvalidQ(q));
    }
    let q = u32::try_from(q).map_err(|_| Error::InvalidQ(q))?;
    let n = 2 * q as usize;
    let phi = cyclotomic(n);
    let m = (phi.len() - 1) / 2;

    // z^{-m} Φ(z) = e_0 + Σ_{k≥1} e_k (z^k + z^{-k}),  e_k = [z^{m+k}] Φ
    let mut result = vec![phi[m].clone()];
    let mut d_prev: Vec<BigInt> = vec![BigInt::from(2)];
    let mut d_cur: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()];
    for k in 1..=m {
        add_scaled(&mut result, &d_cur, &phi[m + k]);
        let next = sub_poly(&shift_up(&d_cur), &d_prev);
        d_prev = std::mem::replace(&mut d_cur, next);
    }
    while result.len() > 1 && result.last().is_some_and(Zero::is_zero) {
        result.pop();
    }

    let poly = MinimalPolynomial { q, coeffs: result };
    let lambda = 2.0 * (PI / q as f64).cos();
    let ok = poly.coeffs.last().is_some_and(One::is_one)
        && poly.degree() == m
        && poly.eval_f64(lambda).abs() < 1e-9 * scale(&poly, lambda);
    if !ok {
        return Err(Error::MinimalPolynomial(q));
    }
    Ok(poly)
}

fn scale(poly: &MinimalPolynomial, x: f64) -> f64 {
    poly.coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c.to_f64().unwrap_or(f64::INFINITY).abs() * x.abs().powi(i as i32))
        .sum::<f64>()
        .max(1.0)
}

/// Φ_n with integer coefficients, constant term first.
fn cyclotomic(n: usize) -> Vec<BigInt> {
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![BigInt::zero(); n + 1];
    num[0] = -BigInt::one();
    num[n] = BigInt::one();
    for d in (1..n).filter(|d| n % d == 0) {
        num = exact_div_monic(&num, &cyclotomic(d));
    }
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![BigInt::zero(); qn + 1];
    for i in (0..=qn).rev() {
        let coef = rem[i + dn].clone();
        if coef.is_zero() {
            continue;
        }
        for (j, dc) in den.iter().enumerate() {
            rem[i + j] -= &coef * dc;
        }
        quot[i] = coef;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

fn add_scaled(acc: &mut Vec<BigInt>, p: &[BigInt], s: &BigInt) {
    if acc.len() < p.len() {
        acc.resize(p.len(), BigInt::zero());
    }
    for (a, c) in acc.iter_mut().zip(p) {
        *a += c * s;
    }
}

fn shift_up(p: &[BigInt]) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(p.len() + 1);
    out.push(BigInt::zero());
    out.extend(p.iter().cloned());
    out
}

fn sub_poly(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), BigInt::zero());
    }
    for (o, c) in out.iter_mut().zip(b) {
        *o -= c;
    }
    out
}

/// Euler's totient, used to state the degree `φ(2q)/2`.
pub fn totient(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(p: &MinimalPolynomial) -> Vec<i64> {
        p.integer_coefficients()
            .iter()
            .map(|c| c.to_i64().unwrap())
            .collect()
    }

    #[test]
    fn small_cases() {
        assert_eq!(ints(&minimal_poly(3).unwrap()), vec![-1, 1]);
        assert_eq!(ints(&minimal_poly(4).unwrap()), vec![-2, 0, 1]);
        assert_eq!(ints(&minimal_poly(5).unwrap()), vec![-1, -1, 1]);
        assert_eq!(ints(&minimal_poly(6).unwrap()), vec![-3, 0, 1]);
    }

    #[test]
    fn rejects_small_q() {
        assert_eq!(minimal_poly(2), Err(Error::InvalidQ(2)));
        assert_eq!(minimal_poly(-7), Err(Error::InvalidQ(-7)));
    }

    // Independent route: expand Π (x - 2cos(kπ/q)) over odd k coprime to q in floating point.
    fn product_expansion(q: u32) -> Vec<f64> {
        let mut poly = vec![1.0];
        for k in (1..q).filter(|k| k % 2 == 1 && k.gcd(&q) == 1) {
            let root = 2.0 * (k as f64 * PI / q as f64).cos();
            let mut next = vec![0.0; poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= root * c;
            }
            poly = next;
        }
        poly
    }

    #[test]
    fn degree_and_roots_up_to_24() {
        for q in 3..=24u32 {
            let p = minimal_poly(q as i64).unwrap();
            assert_eq!(p.degree() as u64, totient(2 * q as u64) / 2, "q={q}");
            let lambda = 2.0 * (PI / q as f64).cos();
            assert!(p.eval_f64(lambda).abs() < 1e-12, "q={q}");
            let expanded = product_expansion(q);
            assert_eq!(expanded.len(), p.degree() + 1);
            for (a, b) in expanded.iter().zip(ints(&p)) {
                assert!((a - b as f64).abs() < 1e-9, "q={q}");
            }
        }
    }
}
