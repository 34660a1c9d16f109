//! Structural ambiguity: the infinite-ambiguity criterion and bounded-length
//! estimates.
//!
//! A trim automaton is infinitely ambiguous iff there are states p ≠ q and a
//! word v with p →v p, p →v q and q →v q. We look for such a triple of paths
//! in the cube of the automaton: states (r, s, t), moving on one shared
//! letter at a time, searching from (p, p, q) for (p, q, q).

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::automaton::{Letter, WeightedAutomaton, Word};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Three equally labelled paths p → p, p → q, q → q in the trimmed automaton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmbiguityWitness {
    pub p: String,
    pub q: String,
    pub word: String,
    #[serde(skip)]
    pub letters: Word,
    /// Visited states, `letters.len() + 1` each.
    pub loop_p: Vec<String>,
    pub p_to_q: Vec<String>,
    pub loop_q: Vec<String>,
}

impl AmbiguityWitness {
    /// Checks the three paths against `a`.
    pub fn replay<S: Scalar>(&self, a: &WeightedAutomaton<S>) -> bool {
        let follows = |states: &[String], start: &str, end: &str| -> bool {
            if states.len() != self.letters.len() + 1 || states[0] != start || states[states.len() - 1] != end {
                return false;
            }
            states.windows(2).zip(&self.letters).all(|(w, &l)| match (a.state_id(&w[0]), a.state_id(&w[1])) {
                (Some(f), Some(t)) => a.find_transition(f, l, t).is_some(),
                _ => false,
            })
        };
        self.p != self.q
            && !self.letters.is_empty()
            && follows(&self.loop_p, &self.p, &self.p)
            && follows(&self.p_to_q, &self.p, &self.q)
            && follows(&self.loop_q, &self.q, &self.q)
    }
}

/// Per state and letter, the successor states.
fn successor_table<S: Scalar>(a: &WeightedAutomaton<S>) -> Vec<Vec<Vec<usize>>> {
    let mut table = vec![vec![Vec::new(); a.alphabet().len()]; a.num_states()];
    for tr in a.transitions() {
        table[tr.from][tr.label].push(tr.to);
    }
    table
}

/// Decides infinite ambiguity on the trim part of `a`. Returns a witness
/// with the shortest word when infinitely ambiguous, `None` otherwise.
pub fn is_infinitely_ambiguous<S: Scalar>(a: &WeightedAutomaton<S>) -> Option<AmbiguityWitness> {
    let t = a.trim();
    let n = t.num_states();
    let succ = successor_table(&t);
    let mut best: Option<(Vec<Triple>, Word, usize, usize)> = None;
    for p in 0..n {
        for q in 0..n {
            if p == q {
                continue;
            }
            let limit = best.as_ref().map(|b| b.1.len());
            if let Some((path, word)) = triple_search(&succ, (p, p, q), (p, q, q), limit) {
                if best.as_ref().is_none_or(|b| word.len() < b.1.len()) {
                    best = Some((path, word, p, q));
                }
            }
        }
    }
    best.map(|(path, letters, p, q)| {
        let name = |s: usize| t.state_name(s).to_string();
        AmbiguityWitness {
            p: name(p),
            q: name(q),
            word: t.format_word(&letters),
            loop_p: path.iter().map(|x| name(x.0)).collect(),
            p_to_q: path.iter().map(|x| name(x.1)).collect(),
            loop_q: path.iter().map(|x| name(x.2)).collect(),
            letters,
        }
    })
}

type Triple = (usize, usize, usize);

/// Breadth-first search in the cube for a non-empty path `from` → `to`.
/// Paths longer than `limit` are not reported.
fn triple_search(
    succ: &[Vec<Vec<usize>>],
    from: Triple,
    to: Triple,
    limit: Option<usize>,
) -> Option<(Vec<Triple>, Word)> {
    let letters = succ.first().map_or(0, Vec::len);
    let mut parent: HashMap<Triple, (Triple, Letter)> = HashMap::new();
    let mut depth: HashMap<Triple, usize> = HashMap::from([(from, 0)]);
    let mut queue = VecDeque::from([from]);
    while let Some(cur) = queue.pop_front() {
        let d = depth[&cur];
        if limit.is_some_and(|l| d + 1 >= l) {
            // Only strictly shorter words can improve on the current best.
            return None;
        }
        for (l, first) in succ[cur.0].iter().enumerate().take(letters) {
            for &r in first {
                for &s in &succ[cur.1][l] {
                    for &t in &succ[cur.2][l] {
                        let next = (r, s, t);
                        if next == to {
                            let mut path = vec![next, cur];
                            let mut word = vec![l];
                            let mut x = cur;
                            while x != from {
                                let (prev, pl) = parent[&x];
                                path.push(prev);
                                word.push(pl);
                                x = prev;
                            }
                            path.reverse();
                            word.reverse();
                            return Some((path, word));
                        }
                        if let std::collections::hash_map::Entry::Vacant(e) = depth.entry(next) {
                            e.insert(d + 1);
                            parent.insert(next, (cur, l));
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
    }
    None
}

/// Largest number of successful paths carried by a word of length at most
/// `bound`. A lower bound on the degree of ambiguity.
pub fn degree_up_to<S: Scalar>(a: &WeightedAutomaton<S>, bound: usize) -> u128 {
    a.max_paths_up_to(bound).0
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceCheck {
    pub equivalent: bool,
    /// Shortest (then lexicographically least) word where the series differ.
    pub counterexample: Option<Word>,
}

/// Compares the two series on every word of length at most `bound`,
/// ⊥ included.
pub fn equivalent_up_to<S: Scalar>(
    a: &WeightedAutomaton<S>,
    b: &WeightedAutomaton<S>,
    bound: usize,
) -> Result<EquivalenceCheck> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch { left: a.alphabet().to_vec(), right: b.alphabet().to_vec() });
    }
    let sa = a.sample_series(bound);
    let sb = b.sample_series(bound);
    let counterexample = sa.entries.iter().find(|(w, x)| sb.get(w) != Some(*x)).map(|(w, _)| w.clone());
    Ok(EquivalenceCheck { equivalent: counterexample.is_none(), counterexample })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::AutomatonBuilder;
    use crate::fixtures;

    type A = WeightedAutomaton<i64>;

    #[test]
    fn loop_and_branch_is_infinitely_ambiguous() {
        let a: A = AutomatonBuilder::new(&["a"])
            .initial("p", 0)
            .final_("q", 0)
            .arc("p", "a", 0, "p")
            .arc("p", "a", 0, "q")
            .arc("q", "a", 0, "q")
            .build()
            .unwrap();
        let w = is_infinitely_ambiguous(&a).expect("witness");
        assert_eq!((w.p.as_str(), w.q.as_str(), w.word.as_str()), ("p", "q", "a"));
        assert!(w.replay(&a));
    }

    #[test]
    fn fig3_is_finitely_ambiguous() {
        assert!(is_infinitely_ambiguous(&fixtures::fig3_maxcount::<i64>()).is_none());
        assert_eq!(degree_up_to(&fixtures::fig3_maxcount::<i64>(), 5), 2);
    }

    #[test]
    fn sequential_is_not_ambiguous() {
        let a = fixtures::count_a::<i64>();
        assert!(is_infinitely_ambiguous(&a).is_none());
        assert_eq!(degree_up_to(&a, 4), 1);
    }

    #[test]
    fn witness_found_only_through_trim_part() {
        // The ambiguous gadget is unreachable, so the trim automaton is clean.
        let a: A = AutomatonBuilder::new(&["a"])
            .initial("s", 0)
            .final_("s", 0)
            .arc("p", "a", 0, "p")
            .arc("p", "a", 0, "q")
            .arc("q", "a", 0, "q")
            .final_("q", 0)
            .build()
            .unwrap();
        assert!(is_infinitely_ambiguous(&a).is_none());
    }

    #[test]
    fn equivalence_counterexample_is_shortest() {
        let full = fixtures::fig3_maxcount::<i64>();
        let half = fixtures::count_a::<i64>();
        let r = equivalent_up_to(&full, &half, 2).unwrap();
        assert!(!r.equivalent);
        assert_eq!(full.format_word(r.counterexample.as_ref().unwrap()), "b");
        assert!(equivalent_up_to(&full, &full, 4).unwrap().equivalent);
    }

    #[test]
    fn tampered_witness_fails_replay() {
        let a = fixtures::fig8_infamb::<i64>();
        let mut w = is_infinitely_ambiguous(&a).unwrap();
        assert!(w.replay(&a));
        w.letters = vec![0];
        assert!(!w.replay(&a));
    }
}
