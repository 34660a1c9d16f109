//! Fixtures against the brute-force path enumerator.

mod common;

use maxplus::ambiguity::{degree_up_to, equivalent_up_to, is_infinitely_ambiguous};
use maxplus::covering::{decompose_unambiguous, schutzenberger_covering};
use maxplus::document::{parse_document, to_json};
use maxplus::dominance::{analyze_sccs, product, satisfies_dominance};
use maxplus::pipeline::decide;
use maxplus::sequentiality::{determinize_weighted, twin_property};
use maxplus::{fixtures, MaxPlus, Rational};

const BOUND: usize = 6;

#[test]
fn evaluation_matches_enumeration() {
    for (name, a) in fixtures::all() {
        for w in common::words(a.alphabet().len(), BOUND) {
            assert_eq!(a.evaluate(&w).unwrap(), common::eval(&a, &w), "{name} on {}", a.format_word(&w));
        }
    }
}

#[test]
fn path_counts_match_enumeration() {
    for (name, a) in fixtures::all() {
        for w in common::words(a.alphabet().len(), 5) {
            let n = a.count_successful_paths(&w).unwrap();
            assert_eq!(n as usize, common::paths(&a, &w), "{name} on {}", a.format_word(&w));
        }
    }
}

#[test]
fn degree_matches_enumeration() {
    for (name, a) in fixtures::all() {
        let k = a.alphabet().len();
        let want = common::words(k, 4).iter().map(|w| common::paths(&a, w)).max().unwrap();
        assert_eq!(degree_up_to(&a, 4) as usize, want, "{name}");
    }
}

#[test]
fn infinite_ambiguity_verdicts() {
    let infinite = ["fig1_heap", "fig4a_heap", "fig6a_heap", "fig8_infamb"];
    for (name, a) in fixtures::all() {
        let w = is_infinitely_ambiguous(&a);
        assert_eq!(w.is_some(), infinite.contains(&name), "{name}");
        if let Some(w) = w {
            assert!(w.replay(&a), "{name}");
        }
    }
}

#[test]
fn infinitely_ambiguous_counts_grow() {
    let a = fixtures::fig8_infamb::<Rational>();
    let degrees: Vec<usize> = (1..=4)
        .map(|l| common::words(a.alphabet().len(), l).iter().map(|w| common::paths(&a, w)).max().unwrap())
        .collect();
    assert!(degrees.windows(2).all(|d| d[0] < d[1]), "{degrees:?}");
}

#[test]
fn coverings_preserve_path_counts() {
    for (name, a) in fixtures::all() {
        let cov = schutzenberger_covering(&a);
        for w in common::words(a.alphabet().len(), 5) {
            assert_eq!(common::paths(&cov.automaton, &w), common::paths(&a, &w), "{name}");
            assert_eq!(common::eval(&cov.automaton, &w), common::eval(&a, &w), "{name}");
        }
    }
}

#[test]
fn decompositions_split_the_series() {
    for (name, a) in fixtures::all() {
        if is_infinitely_ambiguous(&a).is_some() {
            assert!(decompose_unambiguous(&a).is_err(), "{name}");
            continue;
        }
        let leaves = decompose_unambiguous(&a).unwrap().leaves;
        for w in common::words(a.alphabet().len(), BOUND) {
            assert_eq!(common::eval_max(&leaves, &w), common::eval(&a, &w), "{name}");
            assert!(leaves.iter().all(|l| common::paths(l, &w) <= 1), "{name}");
        }
    }
}

#[test]
fn max_count_product_fails_dominance() {
    let family = [fixtures::count_a::<Rational>(), fixtures::count_b()];
    let p = product(&family).unwrap();
    let r = analyze_sccs(&p).unwrap();
    let d = satisfies_dominance(&p, &r);
    assert!(!d.holds);
    assert!(d.witness.unwrap().replay(&p, &r));
    for w in common::words(2, 5) {
        let tuple = p.evaluate(&w);
        for (i, m) in family.iter().enumerate() {
            assert_eq!(tuple.get(i), &common::eval(m, &w));
        }
    }
}

#[test]
fn twin_verdicts() {
    let twins = ["schutz_example", "twin_branch"];
    for (name, a) in fixtures::all() {
        if is_infinitely_ambiguous(&a).is_some() {
            continue;
        }
        let t = twin_property(&a);
        assert_eq!(t.twins, twins.contains(&name), "{name}");
        if !t.twins {
            assert!(t.replay(), "{name}");
        }
    }
}

#[test]
fn determinization_of_twinned_fixtures() {
    let cases: [(&str, maxplus::Automaton); 4] = [
        ("count_a", fixtures::count_a()),
        ("all_ones", fixtures::all_ones()),
        ("schutz_example", fixtures::schutz_example()),
        ("twin_branch", fixtures::twin_branch()),
    ];
    for (name, a) in cases {
        let d = determinize_weighted(&a, 1000).unwrap();
        assert!(d.is_sequential(), "{name}");
        for w in common::words(a.alphabet().len(), BOUND) {
            assert_eq!(common::eval(&d, &w), common::eval(&a, &w), "{name}");
        }
    }
}

#[test]
fn heap_and_explicit_automata_agree() {
    let pairs = [(fixtures::fig6a_heap::<Rational>(), fixtures::fig6b())];
    for (heap, explicit) in pairs {
        assert!(equivalent_up_to(&heap, &explicit, BOUND).unwrap().equivalent);
    }
}

#[test]
fn decide_classifications() {
    let expected = [
        ("fig2_parity", Some(true), Some(false)),
        ("fig3_maxcount", Some(false), Some(false)),
        ("fig4b", Some(true), Some(false)),
        ("fig5_evenblocks", Some(true), Some(false)),
        ("fig6b", Some(false), Some(false)),
        ("schutz_example", Some(true), Some(true)),
        ("twin_branch", Some(true), Some(true)),
        ("fig8_infamb", None, None),
    ];
    for (name, unamb, seq) in expected {
        let r = decide(&fixtures::get(name).unwrap(), BOUND).unwrap();
        assert_eq!((r.unambiguous, r.sequential), (unamb, seq), "{name}");
        assert!(r.is_consistent(), "{name}");
    }
}

#[test]
fn documents_round_trip_through_oracle() {
    for (name, a) in fixtures::all() {
        let back = parse_document(&to_json(&a)).unwrap();
        for w in common::words(a.alphabet().len(), 4) {
            assert_eq!(common::eval(&back, &w), common::eval(&a, &w), "{name}");
        }
    }
}

#[test]
fn empty_word_uses_initial_and_final_weights() {
    for (name, a) in fixtures::all() {
        let want = (0..a.num_states())
            .map(|s| a.initial_weight(s).times(a.final_weight(s)))
            .fold(MaxPlus::Bottom, |x, y| x.plus(&y));
        assert_eq!(a.evaluate(&[]).unwrap(), want, "{name}");
    }
}
