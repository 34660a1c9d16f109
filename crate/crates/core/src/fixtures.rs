//! Example automata from the max-plus ambiguity hierarchy.
//!
//! Every constructor is generic over the scalar; [`get`] and [`NAMES`]
//! expose the registry over exact rationals.

use crate::automaton::{heap_automaton, AutomatonBuilder, WeightedAutomaton};
use crate::scalar::Scalar;
use crate::Automaton;

pub const NAMES: &[&str] = &[
    "fig1_heap",
    "fig2_parity",
    "fig3_maxcount",
    "fig4a_heap",
    "fig4b",
    "fig_na_nfus2",
    "fig5_evenblocks",
    "fig6a_heap",
    "fig6b",
    "fig7_double",
    "fig8_infamb",
    "schutz_example",
    "twin_branch",
];

pub fn get(name: &str) -> Option<Automaton> {
    Some(match name {
        "fig1_heap" => fig1_heap(),
        "fig2_parity" => fig2_parity(),
        "fig3_maxcount" => fig3_maxcount(),
        "fig4a_heap" => fig4a_heap(),
        "fig4b" => fig4b(),
        "fig_na_nfus2" => fig_na_nfus2(),
        "fig5_evenblocks" => fig5_evenblocks(),
        "fig6a_heap" => fig6a_heap(),
        "fig6b" => fig6b(),
        "fig7_double" => fig7_double(),
        "fig8_infamb" => fig8_infamb(),
        "schutz_example" => schutz_example(),
        "twin_branch" => twin_branch(),
        _ => return None,
    })
}

pub fn all() -> Vec<(&'static str, Automaton)> {
    NAMES.iter().map(|&n| (n, get(n).expect("registered"))).collect()
}

/// Three slots, R(a) = {1,2}, R(b) = {2,3}; height of slot 2.
pub fn fig1_heap<S: Scalar>() -> WeightedAutomaton<S> {
    heap_automaton(&["1", "2", "3"], &[("a", &["1", "2"]), ("b", &["2", "3"])], &["2"]).expect("valid model")
}

/// a^n ↦ n for even n, 0 for odd n: two disjoint 2-cycles.
pub fn fig2_parity<S: Scalar>() -> WeightedAutomaton<S> {
    AutomatonBuilder::new(&["a"])
        .initial("A", 0)
        .final_("B", 0)
        .initial("C", 0)
        .final_("C", 0)
        .arc("A", "a", 0, "B")
        .arc("B", "a", 0, "A")
        .arc("C", "a", 1, "D")
        .arc("D", "a", 1, "C")
        .build()
        .expect("valid fixture")
}

/// max(|u|_a, |u|_b): heap automaton with R(a) = {A}, R(b) = {B}.
pub fn fig3_maxcount<S: Scalar>() -> WeightedAutomaton<S> {
    AutomatonBuilder::new(&["a", "b"])
        .initial("A", 0)
        .final_("A", 0)
        .initial("B", 0)
        .final_("B", 0)
        .arcs("A", &[("a", 1), ("b", 0)], "A")
        .arcs("B", &[("a", 0), ("b", 1)], "B")
        .build()
        .expect("valid fixture")
}

/// |u|_a alone (one half of [`fig3_maxcount`]).
pub fn count_a<S: Scalar>() -> WeightedAutomaton<S> {
    AutomatonBuilder::new(&["a", "b"])
        .initial("A", 0)
        .final_("A", 0)
        .arcs("A", &[("a", 1), ("b", 0)], "A")
        .build()
        .expect("valid fixture")
}

/// |u|_b alone (the other half of [`fig3_maxcount`]).
pub fn count_b<S: Scalar>() -> WeightedAutomaton<S> {
    AutomatonBuilder::new(&["a", "b"])
        .initial("B", 0)
        .final_("B", 0)
        .arcs("B", &[("a", 0), ("b", 1)], "B")
        .build()
        .expect("valid fixture")
}

/// |u|: every letter weighs 1.
pub fn all_ones<S: Scalar>() -> WeightedAutomaton<S> {
    AutomatonBuilder::new(&["a", "b"])
        .initial("U", 0)
        .final_("U", 0)
        .arcs("U", &[("a", 1), ("b", 1)], "U")
        .build()
        .expect("valid fixture")
}

/// The constant series 0 over {a,b}*.
pub fn constant_zero<S: Scalar>() -> WeightedAutomaton<S> {
    AutomatonBuilder::new(&["a", "b"])
        .initial("Z", 0)
        .final_("Z", 0)
        .arcs("Z", &[("a", 0), ("b", 0)], "Z")
        .build()
        .expect("valid fixture")
}

/// Heap model with R(a) = {1,2}, R(b) = {2}; height of slot 1.
pub fn fig4a_heap<S: Scalar>() -> WeightedAutomaton<S> {
    heap_automaton(&["A", "B"], &[("a", &["A", "B"]), ("b", &["B"])], &["A"]).expect("valid model")
}

/// Unambiguous automaton reading the heap of [`fig4a_heap`] on words
/// containing an `a`: B loops on a|1, b|1, jumps to A on the last `a`.
pub fn fig4b<S: Scalar>() -> WeightedAutomaton<S> {
    AutomatonBuilder::new(&["a", "b"])
        .state("A")
        .initial("B", 0)
        .final_("A", 0)
        .arcs("A", &[("b", 0)], "A")
        .arcs("B", &[("a", 1), ("b", 1)], "B")
        .arc("B", "a", 1, "A")
        .build()
        .expect("valid fixture")
}

/// [`fig4b`] with 1 subtracted from every letter: u a b^k ↦ -k.
pub fn fig_na_nfus2<S: Scalar>() -> WeightedAutomaton<S> {
    AutomatonBuilder::new(&["a", "b"])
        .initial("A", 0)
        .final_("B", 0)
        .arcs("A", &[("a", 0), ("b", 0)], "A")
        .arc("A", "a", 0, "B")
        .arc("B", "b", -1, "B")
        .build()
        .expect("valid fixture")
}

/// Sum of the even a-blocks: upper 2-cycle (A, B) at weight 0, lower
/// 2-cycle (C, D) at weight 1 per letter, b-arcs B→A, B→C, C→A, C→C.
pub fn fig5_evenblocks<S: Scalar>() -> WeightedAutomaton<S> {
    evenblocks(["a", "b"], ["A", "B", "C", "D"])
}

fn evenblocks<S: Scalar>(letters: [&str; 2], names: [&str; 4]) -> WeightedAutomaton<S> {
    let [x, y] = letters;
    let [a, b, c, d] = names;
    AutomatonBuilder::new(&["a", "b"])
        .initial(a, 0)
        .final_(b, 0)
        .initial(c, 0)
        .final_(c, 0)
        .state(d)
        .arc(a, x, 0, b)
        .arc(b, x, 0, a)
        .arc(c, x, 1, d)
        .arc(d, x, 1, c)
        .arc(b, y, 0, a)
        .arc(b, y, 0, c)
        .arc(c, y, 0, a)
        .arc(c, y, 0, c)
        .build()
        .expect("valid fixture")
}

/// Heap model with R(a) = {C}, R(b) = {A,B}, R(c) = {B}; slots A and C final.
pub fn fig6a_heap<S: Scalar>() -> WeightedAutomaton<S> {
    heap_automaton(&["A", "B", "C"], &[("a", &["C"]), ("b", &["A", "B"]), ("c", &["B"])], &["A", "C"])
        .expect("valid model")
}

/// Two-ambiguous automaton for the series of [`fig6a_heap`].
pub fn fig6b<S: Scalar>() -> WeightedAutomaton<S> {
    AutomatonBuilder::new(&["a", "b", "c"])
        .initial("A", 0)
        .final_("A", 0)
        .initial("B", 0)
        .initial("C", 0)
        .final_("C", 0)
        .arcs("A", &[("a", 0), ("c", 0)], "A")
        .arcs("B", &[("a", 0), ("b", 1), ("c", 1)], "B")
        .arc("B", "b", 1, "A")
        .arcs("C", &[("a", 1), ("b", 0), ("c", 0)], "C")
        .build()
        .expect("valid fixture")
}

/// [`fig5_evenblocks`] side by side with its copy under a ↔ b.
pub fn fig7_double<S: Scalar>() -> WeightedAutomaton<S> {
    let left: WeightedAutomaton<S> = evenblocks(["a", "b"], ["A", "B", "C", "D"]);
    let right: WeightedAutomaton<S> = evenblocks(["b", "a"], ["A'", "B'", "C'", "D'"]);
    left.union(&right).expect("same alphabet")
}

/// Infinitely ambiguous: both states loop on c and are linked by c-arcs.
pub fn fig8_infamb<S: Scalar>() -> WeightedAutomaton<S> {
    AutomatonBuilder::new(&["a", "b", "c"])
        .initial("A", 0)
        .final_("A", 0)
        .initial("B", 0)
        .final_("B", 0)
        .arc("A", "c", 1, "B")
        .arc("B", "c", 1, "A")
        .arcs("A", &[("a", 1), ("b", 0), ("c", 1)], "A")
        .arcs("B", &[("a", 0), ("b", 1), ("c", 1)], "B")
        .build()
        .expect("valid fixture")
}

/// Three-state Boolean example for the covering construction, all weights 0.
pub fn schutz_example<S: Scalar>() -> WeightedAutomaton<S> {
    AutomatonBuilder::new(&["a", "b"])
        .initial("p", 0)
        .final_("p", 0)
        .initial("q", 0)
        .final_("r", 0)
        .arc("p", "a", 0, "q")
        .arc("p", "b", 0, "r")
        .arc("q", "a", 0, "r")
        .arc("q", "b", 0, "p")
        .arc("r", "b", 0, "r")
        .build()
        .expect("valid fixture")
}

/// Twin-positive branching automaton: s →a|0 p, s →a|1 q, a-loops of
/// weight 1 on p and q, p final with a b-loop of weight 0, q final with a
/// c-loop of weight 0.
pub fn twin_branch<S: Scalar>() -> WeightedAutomaton<S> {
    AutomatonBuilder::new(&["a", "b", "c"])
        .initial("s", 0)
        .arc("s", "a", 0, "p")
        .arc("s", "a", 1, "q")
        .arcs("p", &[("a", 1), ("b", 0)], "p")
        .arcs("q", &[("a", 1), ("c", 0)], "q")
        .final_("p", 0)
        .final_("q", 0)
        .build()
        .expect("valid fixture")
}
