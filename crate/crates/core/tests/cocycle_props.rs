use dedesym_core::checks::random_sl2z;
use dedesym_core::classical::rademacher_psi;
use dedesym_core::cocycle::{omega, omega_analytic, psi_accumulate, GroupElement};
use dedesym_core::hecke::make_group;
use dedesym_core::{LambdaField, Letter, Word};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((any::<bool>(), 1i64..4, any::<bool>()), 0..max_len).prop_map(|ls| {
        Word::from_letters(ls.into_iter().map(|(iota, n, neg)| {
            let e = if neg { -n } else { n };
            if iota {
                Letter::iota(e.signum())
            } else {
                Letter::tau(e)
            }
        }))
    })
}

fn sl2z(seed: u64) -> GroupElement {
    let f = LambdaField::get(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GroupElement::from_integer_matrix(&f, &random_sl2z(&mut rng, 200))
}

proptest! {
    #[test]
    fn cocycle_identity_hecke(q in prop::sample::select(vec![4i64, 5, 7]),
                              a in word_strategy(8), b in word_strategy(8), c in word_strategy(8)) {
        let g = make_group(q).unwrap();
        let (x, y, z) = (
            g.word_to_matrix(&a).into_element(),
            g.word_to_matrix(&b).into_element(),
            g.word_to_matrix(&c).into_element(),
        );
        let lhs = omega(&x, &y).unwrap().quarters() + omega(&x.mul(&y), &z).unwrap().quarters();
        let rhs = omega(&x, &y.mul(&z)).unwrap().quarters() + omega(&y, &z).unwrap().quarters();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(omega(&x, &y).unwrap().in_cocycle_range());
    }

    #[test]
    fn cocycle_identity_sl2z(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let (x, y, z) = (sl2z(s1), sl2z(s2), sl2z(s3));
        let lhs = omega(&x, &y).unwrap().quarters() + omega(&x.mul(&y), &z).unwrap().quarters();
        let rhs = omega(&x, &y.mul(&z)).unwrap().quarters() + omega(&y, &z).unwrap().quarters();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn analytic_matches_and_is_z_independent(s1 in any::<u64>(), s2 in any::<u64>(),
                                             re in -3.0f64..3.0, im in 0.2f64..3.0) {
        let (x, y) = (sl2z(s1), sl2z(s2));
        let exact = omega(&x, &y).unwrap().to_f64();
        for z in [Complex64::i(), Complex64::new(re, im)] {
            prop_assert!((omega_analytic(&x, &y, z).unwrap() - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn psi_coboundary_sl2z(s1 in any::<u64>(), s2 in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(s1 ^ (s2 << 1));
        let (g, h) = (random_sl2z(&mut rng, 1000), random_sl2z(&mut rng, 1000));
        let f = LambdaField::get(3).unwrap();
        let w = omega(&GroupElement::from_integer_matrix(&f, &g), &GroupElement::from_integer_matrix(&f, &h)).unwrap();
        prop_assert_eq!(
            rademacher_psi(&g.mul(&h)) - rademacher_psi(&g) - rademacher_psi(&h),
            w.to_rational()
        );
    }

    #[test]
    fn accumulation_is_bracketing_independent(q in 3i64..8, a in word_strategy(10), b in word_strategy(10)) {
        let g = make_group(q).unwrap();
        let gens = g.generator_values();
        let (ma, pa) = psi_accumulate(&a, gens).unwrap();
        let (mb, pb) = psi_accumulate(&b, gens).unwrap();
        let (mab, pab) = psi_accumulate(&a.concat(&b), gens).unwrap();
        prop_assert_eq!(&mab, &ma.mul(&mb));
        let w = omega(&ma, &mb).unwrap();
        prop_assert_eq!(pab, (&pa + &pb).add_rational(&w.to_rational()));
    }
}
