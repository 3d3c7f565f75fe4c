use dedesym_core::field::{minimal_poly, totient};
use dedesym_core::{FieldElement, LambdaField, Rational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn element(q: i64, coords: &[(i64, i64)]) -> FieldElement {
    let f = LambdaField::get(q).unwrap();
    let rs: Vec<Rational> = coords
        .iter()
        .map(|&(n, d)| Rational::new(n.into(), d.into()))
        .collect();
    FieldElement::from_coords(&f, &rs)
}

fn coords() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-50i64..50, 1i64..12), 1..6)
}

proptest! {
    #[test]
    fn ring_axioms(q in 3i64..13, x in coords(), y in coords(), z in coords()) {
        let (x, y, z) = (element(q, &x), element(q, &y), element(q, &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert!((&x - &x).is_zero());
    }

    #[test]
    fn sign_agrees_with_enclosure(q in 3i64..13, x in coords()) {
        let x = element(q, &x);
        let e = x.to_float(128);
        if !e.contains_zero() {
            let expected = if e.lo > Rational::from_integer(0.into()) { 1 } else { -1 };
            prop_assert_eq!(x.sign(), expected);
        }
    }

    #[test]
    fn text_round_trip(q in 3i64..13, x in coords()) {
        let x = element(q, &x);
        let f = LambdaField::get(q).unwrap();
        prop_assert_eq!(FieldElement::parse(&f, &x.to_string()).unwrap(), x);
    }
}

#[test]
fn inverses_for_q_up_to_12() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for q in 3..=12 {
        let f = LambdaField::get(q).unwrap();
        let one = FieldElement::one(&f);
        let mut done = 0;
        while done < 1000 {
            let n = f.degree();
            let c: Vec<(i64, i64)> = (0..n)
                .map(|_| (rng.gen_range(-30..=30), rng.gen_range(1..=9)))
                .collect();
            let x = element(q, &c);
            if x.is_zero() {
                continue;
            }
            assert_eq!(&x * &x.inv().unwrap(), one, "q={q} x={x}");
            done += 1;
        }
    }
}

#[test]
fn minimal_polynomial_degree_and_root() {
    for q in 3..=24u64 {
        let p = minimal_poly(q as i64).unwrap();
        assert_eq!(p.degree() as u64, totient(2 * q) / 2);
        let lambda = 2.0 * (std::f64::consts::PI / q as f64).cos();
        assert!(p.eval_f64(lambda).abs() < 1e-12, "q={q}");
    }
}

#[test]
fn quadratic_cases() {
    // λ_4 = √2 and λ_6 = √3.
    for (q, square) in [(4, 2), (6, 3)] {
        let f = LambdaField::get(q).unwrap();
        let l = FieldElement::lambda(&f);
        assert_eq!(&l * &l, FieldElement::from_int(&f, square));
        assert!((l.to_f64() - (square as f64).sqrt()).abs() < 1e-12);
    }
}
