//! Values from the reference examples, checked against implementations that
//! live only here: a literal sawtooth sum in `i128` fractions, a separate η
//! product, and the Gauss–Bonnet area of the (2, q, ∞) triangle.

use std::f64::consts::PI;

use dedesym_core::classical::{
    dedekind_sum_fast, dedekind_sum_naive, rademacher_phi, reciprocity_residual, CoprimePair,
    IntegerMatrix,
};
use dedesym_core::hecke::{make_group, DoubleCosetRow};
use dedesym_core::{FieldElement, Rational, Word};
use num_complex::Complex64;
use num_traits::ToPrimitive;

/// `Σ_{k=1}^{c-1} ((k/c))((ak/c))` with every term scaled by `4c²`.
fn literal_sum(a: i64, c: i64) -> (i128, i128) {
    // 2c·((x/c)) = 2(x mod c) - c off multiples of c.
    let saw = |x: i64| -> i128 {
        let r = x.rem_euclid(c);
        if r == 0 {
            0
        } else {
            2 * r as i128 - c as i128
        }
    };
    let total: i128 = (1..c).map(|k| saw(k) * saw(a * k)).sum();
    (total, 4 * (c as i128) * (c as i128))
}

fn same(r: &Rational, (n, d): (i128, i128)) -> bool {
    r.numer().to_i128().unwrap() * d == n * r.denom().to_i128().unwrap()
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

#[test]
fn dedekind_examples() {
    for (a, c, expected) in [(0, 1, rat(0, 1)), (1, 3, rat(1, 18)), (2, 5, rat(0, 1)), (3, 1, rat(0, 1))] {
        let p = CoprimePair::new(a, c).unwrap();
        assert!(same(&expected, literal_sum(a, c)));
        assert_eq!(dedekind_sum_naive(&p), expected);
        assert_eq!(dedekind_sum_fast(&p), expected);
    }
}

#[test]
fn literal_oracle_agrees_up_to_120() {
    for c in 1..=120i64 {
        for a in -c..2 * c {
            if num_integer::gcd(a, c) != 1 {
                continue;
            }
            let p = CoprimePair::new(a, c).unwrap();
            assert!(same(&dedekind_sum_fast(&p), literal_sum(a, c)), "({a},{c})");
        }
    }
}

#[test]
fn reciprocity_examples() {
    assert_eq!(reciprocity_residual(1, 2).unwrap(), rat(0, 1));
    assert_eq!(reciprocity_residual(1, 3).unwrap(), rat(0, 1));
}

/// `log η(z) = πiz/12 + Σ log(1 - e^{2πinz})`, summed until terms fall below 1e-17.
fn log_eta(z: Complex64) -> Complex64 {
    let qn = (Complex64::i() * 2.0 * PI * z).exp();
    let mut acc = Complex64::i() * PI * z / 12.0;
    let mut power = qn;
    while power.norm() > 1e-17 {
        acc += (Complex64::new(1.0, 0.0) - power).ln();
        power *= qn;
    }
    acc
}

/// φ from `log η(γz) = log η(z) + πiφ + ½ log((cz+d)/(i·sign c))`, at a
/// point with `Im z = Im γz`.
fn eta_phi(a: i64, b: i64, c: i64, d: i64) -> f64 {
    let (af, bf, cf, df) = (a as f64, b as f64, c as f64, d as f64);
    let z = if c == 0 {
        Complex64::i()
    } else {
        Complex64::new(-df / cf, 1.0 / cf.abs())
    };
    let j = z * cf + df;
    let gz = (z * af + bf) / j;
    let half = if c == 0 {
        0.5 * Complex64::new(df, 0.0).ln()
    } else {
        0.5 * (j / (Complex64::i() * cf.signum())).ln()
    };
    ((log_eta(gz) - log_eta(z) - half) / (Complex64::i() * PI)).re
}

#[test]
fn phi_examples_against_eta() {
    let cases = [
        ((0, -1, 1, 0), rat(0, 1)),
        ((1, 1, 0, 1), rat(1, 12)),
        ((1, 0, 3, 1), rat(0, 1)),
        ((1, 0, 0, 1), rat(0, 1)),
        ((-1, 0, 0, -1), rat(-1, 2)),
        ((2, 1, 5, 3), rademacher_phi(&IntegerMatrix::new(2, 1, 5, 3).unwrap())),
        ((-3, -1, 7, 2), rademacher_phi(&IntegerMatrix::new(-3, -1, 7, 2).unwrap())),
        ((-13, 5, 44, -17), rademacher_phi(&IntegerMatrix::new(-13, 5, 44, -17).unwrap())),
    ];
    for ((a, b, c, d), expected) in cases {
        let m = IntegerMatrix::new(a, b, c, d).unwrap();
        assert_eq!(rademacher_phi(&m), expected);
        let numeric = eta_phi(a, b, c, d);
        assert!(
            (numeric - expected.to_f64().unwrap()).abs() < 1e-9,
            "({a},{b},{c},{d}): {numeric} vs {expected}"
        );
    }
}

#[test]
fn kappa_is_gauss_bonnet_area_over_4pi() {
    for q in 3..=12i64 {
        // Area of the (2, q, ∞) triangle group quotient: π(1 - 1/2 - 1/q)·2.
        let area = PI * (1.0 - 2.0 / q as f64);
        let g = make_group(q).unwrap();
        assert!((g.kappa().to_f64().unwrap() - area / (4.0 * PI)).abs() < 1e-15);
    }
}

#[test]
fn symbol_examples() {
    let g3 = make_group(3).unwrap();
    let s = g3.symbol_from_word(&Word::parse("i,t^-3,i^-1").unwrap()).unwrap();
    assert!(same(&s.value().to_rational().unwrap(), literal_sum(1, 3)));

    // (3,1): S(1,-3) + (1/12)(3 + 1/3 + 1/3) - 1/4 with S(1,-3) = 0.
    let f = g3.field();
    let row = DoubleCosetRow::new(FieldElement::from_int(f, 3), FieldElement::from_int(f, 1)).unwrap();
    let expected = rat(1, 12) * (rat(3, 1) + rat(2, 3)) - rat(1, 4);
    assert_eq!(expected, rat(1, 18));
    assert_eq!(g3.symbol_descent(&row).unwrap().value().to_rational().unwrap(), expected);
}
