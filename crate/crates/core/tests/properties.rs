mod common;

use maxplus::ambiguity::is_infinitely_ambiguous;
use maxplus::covering::{decompose_with_cap, schutzenberger_covering};
use maxplus::document::{parse_document, to_json};
use maxplus::pipeline::decide;
use maxplus::sequentiality::twin_property;
use maxplus::{Automaton, MaxPlus, MaxPlusTuple, Rational, WeightedAutomaton};
use num::BigInt;
use proptest::prelude::*;

type Shape = (usize, Vec<(usize, usize, i64, usize)>, Vec<Option<i64>>, Vec<Option<i64>>);

/// Up to `max_states` states over {a, b}, weights in -2..=2.
fn shape(max_states: usize) -> impl Strategy<Value = Shape> {
    (1..=max_states).prop_flat_map(|n| {
        let weight = prop::option::weighted(0.5, -2i64..=2);
        (
            Just(n),
            prop::collection::vec((0..n, 0..2usize, -2i64..=2, 0..n), 0..=2 * n + 2),
            prop::collection::vec(weight.clone(), n),
            prop::collection::vec(weight, n),
        )
    })
}

fn build<S: maxplus::Scalar>((n, arcs, init, fin): &Shape) -> WeightedAutomaton<S> {
    let mut a = WeightedAutomaton::new(&["a", "b"]).unwrap();
    for s in 0..*n {
        a.add_state(format!("s{s}")).unwrap();
    }
    let lift = |w: &Option<i64>| w.map_or(MaxPlus::Bottom, MaxPlus::int);
    for s in 0..*n {
        a.set_initial(s, lift(&init[s]));
        a.set_final(s, lift(&fin[s]));
    }
    for &(from, label, w, to) in arcs {
        if a.find_transition(from, label, to).is_none() {
            a.add_transition(from, label, S::from_i64(w).unwrap(), to).unwrap();
        }
    }
    a
}

fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn evaluation_matches_enumeration(s in shape(4)) {
        let a: WeightedAutomaton<i64> = build(&s);
        for w in common::words(2, 4) {
            prop_assert_eq!(a.evaluate(&w).unwrap(), common::eval(&a, &w));
            prop_assert_eq!(a.count_successful_paths(&w).unwrap() as usize, common::paths(&a, &w));
        }
    }

    #[test]
    fn trim_preserves_the_series(s in shape(4)) {
        let a: WeightedAutomaton<i64> = build(&s);
        let t = a.trim();
        prop_assert!(t.is_trim());
        for w in common::words(2, 4) {
            prop_assert_eq!(t.evaluate(&w).unwrap(), a.evaluate(&w).unwrap());
        }
    }

    #[test]
    fn bottom_iff_no_path(s in shape(4)) {
        let a: WeightedAutomaton<i64> = build(&s);
        for w in common::words(2, 4) {
            prop_assert_eq!(a.evaluate(&w).unwrap().is_bottom(), a.count_successful_paths(&w).unwrap() == 0);
        }
    }

    #[test]
    fn covering_is_a_path_bijection(s in shape(3)) {
        let a: WeightedAutomaton<i64> = build(&s);
        let cov = schutzenberger_covering(&a);
        for w in common::words(2, 4) {
            prop_assert_eq!(common::paths(&cov.automaton, &w), common::paths(&a, &w));
            prop_assert_eq!(common::eval(&cov.automaton, &w), common::eval(&a, &w));
        }
    }

    #[test]
    fn ambiguity_witnesses_replay(s in shape(4)) {
        let a: WeightedAutomaton<i64> = build(&s);
        if let Some(w) = is_infinitely_ambiguous(&a) {
            prop_assert!(w.replay(&a));
        }
    }

    #[test]
    fn decompositions_are_unambiguous_and_exact(s in shape(3)) {
        let a: WeightedAutomaton<i64> = build(&s);
        prop_assume!(is_infinitely_ambiguous(&a).is_none());
        let leaves = decompose_with_cap(&a, 4096).unwrap().leaves;
        for w in common::words(2, 5) {
            prop_assert_eq!(common::eval_max(&leaves, &w), common::eval(&a, &w));
            for leaf in &leaves {
                prop_assert!(common::paths(leaf, &w) <= 1);
            }
        }
    }

    #[test]
    fn decide_is_consistent(s in shape(3)) {
        let a: Automaton = build(&s);
        match decide(&a, 4) {
            Ok(r) => {
                prop_assert!(r.is_consistent());
                if let Some(seq) = &r.artifacts.sequential {
                    prop_assert!(seq.is_sequential());
                    for w in common::words(2, 5) {
                        prop_assert_eq!(common::eval(seq, &w), common::eval(&a, &w));
                    }
                }
                if let Some(u) = &r.artifacts.unambiguous {
                    prop_assert!(common::words(2, 5).iter().all(|w| common::paths(u, w) <= 1));
                }
            }
            Err(e) => prop_assert!(e.is_cap(), "{}", e),
        }
    }

    #[test]
    fn twins_invariant_under_shift(s in shape(3), c in -3i64..=3, d in 1i64..=3) {
        let a: Automaton = build(&s);
        prop_assume!(is_infinitely_ambiguous(&a).is_none());
        let shifted = a.shift_transitions(&rational(c, d));
        prop_assert_eq!(twin_property(&a).twins, twin_property(&shifted).twins);
    }

    #[test]
    fn documents_round_trip(s in shape(4)) {
        let a: Automaton = build(&s);
        let text = to_json(&a);
        let back = parse_document(&text).unwrap();
        prop_assert_eq!(to_json(&back), text);
        prop_assert_eq!(back, a);
    }

    #[test]
    fn vnorm_is_idempotent(coords in prop::collection::vec(prop::option::of(-5i64..=5), 1..5)) {
        let t = MaxPlusTuple::new(coords.iter().map(|c| c.map_or(MaxPlus::Bottom, MaxPlus::int)).collect::<Vec<MaxPlus<i64>>>());
        prop_assume!(t.has_finite());
        let n = t.vnorm().unwrap();
        prop_assert_eq!(n.vnorm().unwrap(), n.clone());
        prop_assert_eq!(n.vmin().unwrap(), 0);
        for (x, y) in t.coords().iter().zip(n.coords()) {
            prop_assert_eq!(x.is_bottom(), y.is_bottom());
        }
    }
}
