use dedesym_core::checks::reduced_words;
use dedesym_core::hecke::{make_group, ReductionStep};
use dedesym_core::{Letter, Word};
use num_traits::Zero;
use proptest::prelude::*;

fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((any::<bool>(), -4i64..5), 1..max_len).prop_map(|ls| {
        Word::from_letters(ls.into_iter().map(|(iota, e)| {
            if iota {
                Letter::iota(if e < 0 { -1 } else { 1 })
            } else {
                Letter::tau(e)
            }
        }))
    })
}

proptest! {
    #[test]
    fn algorithms_agree(q in 3i64..10, w in word_strategy(14)) {
        let g = make_group(q).unwrap();
        let m = g.word_to_matrix(&w);
        prop_assume!(!m.element().c().is_zero());
        let a = g.symbol_from_word(&w).unwrap();
        let b = g.symbol_descent(&m.row().unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn double_coset_invariance(q in 3i64..8, w in word_strategy(10), k in -3i64..4, j in -3i64..4) {
        let g = make_group(q).unwrap();
        prop_assume!(!g.word_to_matrix(&w).element().c().is_zero());
        let s = g.symbol_from_word(&w).unwrap();
        let left = Word::from_letters([Letter::tau(k)]).concat(&w);
        let right = w.concat(&Word::from_letters([Letter::tau(j)]));
        prop_assert_eq!(&g.symbol_from_word(&left).unwrap(), &s);
        prop_assert_eq!(&g.symbol_from_word(&right).unwrap(), &s);
        // 𝒮 is even.
        let neg = w.concat(&Word::from_letters([Letter::iota(2)]));
        prop_assert_eq!(&g.symbol_from_word(&neg).unwrap(), &s);
    }

    #[test]
    fn three_term_relation(q in 3i64..8, a in word_strategy(8), b in word_strategy(8)) {
        let g = make_group(q).unwrap();
        let (x, y) = (g.word_to_matrix(&a), g.word_to_matrix(&b));
        let xy = x.mul(&y);
        prop_assume!(!x.element().c().is_zero() && !y.element().c().is_zero() && !xy.element().c().is_zero());
        prop_assert!(g.three_term_residual(&x, &y).unwrap().is_zero());
    }

    #[test]
    fn reciprocity_hecke(q in 3i64..8, w in word_strategy(10)) {
        let g = make_group(q).unwrap();
        let m = g.word_to_matrix(&w);
        prop_assume!(!m.element().c().is_zero() && !m.element().d().is_zero());
        prop_assert!(g.reciprocity_residual_hecke(&m).unwrap().is_zero());
    }

    #[test]
    fn membership_round_trip(q in 3i64..9, w in word_strategy(12)) {
        let g = make_group(q).unwrap();
        let m = g.denormalize(&g.word_to_matrix(&w));
        let found = g.membership(&m).unwrap().expect("member");
        prop_assert_eq!(g.denormalize(&g.word_to_matrix(&found)), m);
    }
}

#[test]
fn reduction_strictly_shrinks_c() {
    let words = reduced_words(12);
    for q in [3i64, 5, 7] {
        let g = make_group(q).unwrap();
        for w in &words {
            let m = g.word_to_matrix(w);
            if m.element().c().is_zero() {
                continue;
            }
            let trace = g.rosen_reduce(&m.row().unwrap()).unwrap();
            let mut prev = trace.start.c().abs();
            for (step, row) in trace.steps.iter().zip(&trace.rows) {
                if *step == ReductionStep::Swap {
                    let c = row.c().abs();
                    assert_eq!(c.cmp_embedded(&prev), std::cmp::Ordering::Less, "q={q} {w}");
                    prev = c;
                }
            }
        }
    }
}

#[test]
fn psi_support_q7() {
    let g = make_group(7).unwrap();
    for w in reduced_words(10) {
        let rep = g.rationality_report(&w).unwrap();
        assert!(rep.support_in_span, "{w}");
        assert!(rep.coords.iter().skip(2).all(Zero::is_zero));
    }
}

#[test]
fn tau_power_psi_in_normalized_coordinates() {
    for q in 3..=8i64 {
        let g = make_group(q).unwrap();
        for n in [-5i64, 1, 4] {
            let rep = g.rationality_report(&Word::from_letters([Letter::tau(n)])).unwrap();
            assert_eq!(
                rep.psi_rs.0,
                dedesym_core::Rational::new((n * (q - 2)).into(), (4 * q).into())
            );
        }
    }
}
