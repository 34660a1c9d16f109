//! Boolean determinization, the Schützenberger covering and the
//! decomposition of a finitely ambiguous automaton into unambiguous ones
//! with the same support.
//!
//! The covering is the trim part of the product of `A` with its subset
//! automaton `D`. Its states are pairs (p, P) with p ∈ P; the states sharing
//! a subset P form a column. Weights are carried over from `A` along the
//! projection, so every automaton built from the covering is already
//! decorated.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use crate::ambiguity::{degree_up_to, is_infinitely_ambiguous};
use crate::automaton::{format_word, tuple_name, Letter, WeightedAutomaton};
use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::scalar::Scalar;
use crate::weight::MaxPlus;

/// Length up to which every leaf is re-checked for unambiguity and support.
pub const POST_CHECK_BOUND: usize = 6;
/// Upper bound on the number of leaves produced by a decomposition.
pub const DEFAULT_LEAF_CAP: usize = 1 << 12;

/// Accessible deterministic Boolean automaton on subsets of source states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetAutomaton {
    alphabet: Vec<String>,
    source_states: Vec<String>,
    subsets: Vec<Vec<usize>>,
    finals: Vec<bool>,
    delta: Vec<Vec<Option<usize>>>,
}

impl SubsetAutomaton {
    pub fn num_states(&self) -> usize {
        self.subsets.len()
    }

    /// Index of the initial subset, absent when the source has no initial state.
    pub fn initial(&self) -> Option<usize> {
        (!self.subsets.is_empty()).then_some(0)
    }

    /// Source states of a subset state, sorted.
    pub fn subset(&self, s: usize) -> &[usize] {
        &self.subsets[s]
    }

    pub fn is_final(&self, s: usize) -> bool {
        self.finals[s]
    }

    pub fn next(&self, s: usize, letter: Letter) -> Option<usize> {
        self.delta[s][letter]
    }

    pub fn name(&self, s: usize) -> String {
        let names: Vec<&str> = self.subsets[s].iter().map(|&p| self.source_states[p].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// The subset automaton as a weighted automaton with all weights 0.
    pub fn to_automaton<S: Scalar>(&self) -> WeightedAutomaton<S> {
        let mut a = WeightedAutomaton::new(&self.alphabet).expect("alphabet already validated");
        for s in 0..self.num_states() {
            let id = a.add_state(self.name(s)).expect("subsets are distinct");
            if self.finals[s] {
                a.set_final(id, MaxPlus::one());
            }
        }
        if let Some(i) = self.initial() {
            a.set_initial(i, MaxPlus::one());
        }
        for s in 0..self.num_states() {
            for (l, t) in self.delta[s].iter().enumerate() {
                if let Some(t) = t {
                    a.add_transition(s, l, S::zero(), *t).expect("deterministic");
                }
            }
        }
        a
    }
}

/// Classical accessible subset construction, breadth-first with letters in
/// alphabet order. Empty subsets are not materialized.
pub fn determinize_boolean<S: Scalar>(a: &WeightedAutomaton<S>) -> SubsetAutomaton {
    let mut out = SubsetAutomaton {
        alphabet: a.alphabet().to_vec(),
        source_states: a.states().to_vec(),
        subsets: Vec::new(),
        finals: Vec::new(),
        delta: Vec::new(),
    };
    let start: Vec<usize> = a.initial_states().collect();
    if start.is_empty() {
        return out;
    }
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |set: Vec<usize>, out: &mut SubsetAutomaton, queue: &mut VecDeque<usize>| -> usize {
        if let Some(&i) = index.get(&set) {
            return i;
        }
        let i = out.subsets.len();
        out.finals.push(set.iter().any(|&p| a.final_weight(p).is_finite()));
        out.delta.push(vec![None; a.alphabet().len()]);
        out.subsets.push(set.clone());
        index.insert(set, i);
        queue.push_back(i);
        i
    };
    intern(start, &mut out, &mut queue);
    while let Some(s) = queue.pop_front() {
        for l in 0..a.alphabet().len() {
            let mut next: Vec<usize> = out.subsets[s]
                .iter()
                .flat_map(|&p| a.outgoing(p).iter().map(|&t| a.transition(t)))
                .filter(|t| t.label == l)
                .map(|t| t.to)
                .collect();
            next.sort_unstable();
            next.dedup();
            if !next.is_empty() {
                let t = intern(next, &mut out, &mut queue);
                out.delta[s][l] = Some(t);
            }
        }
    }
    out
}

/// The Schützenberger covering of an automaton.
#[derive(Clone, Debug)]
pub struct Covering<S> {
    /// Covering structure, decorated with the source weights.
    pub automaton: WeightedAutomaton<S>,
    pub subsets: SubsetAutomaton,
    /// Per covering state, its (source state, subset state) pair.
    pub pairs: Vec<(usize, usize)>,
    /// Per covering transition, the source transition it projects onto.
    pub origin: Vec<usize>,
    /// The trimmed source automaton the covering was built from.
    pub source: WeightedAutomaton<S>,
}

impl<S: Scalar> Covering<S> {
    pub fn column_of(&self, state: usize) -> usize {
        self.pairs[state].1
    }

    /// Covering states grouped by subset component, in subset order.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        let mut by: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (s, &(_, c)) in self.pairs.iter().enumerate() {
            by.entry(c).or_default().push(s);
        }
        by.into_values().collect()
    }
}

/// Builds the covering of the trim part of `a`.
pub fn schutzenberger_covering<S: Scalar>(a: &WeightedAutomaton<S>) -> Covering<S> {
    let src = a.trim();
    let subsets = determinize_boolean(&src);
    let mut cov = src.empty_like();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut origin = Vec::new();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut queue = VecDeque::new();

    let mut intern = |pair: (usize, usize), cov: &mut WeightedAutomaton<S>, pairs: &mut Vec<(usize, usize)>| {
        if let Some(&i) = index.get(&pair) {
            return (i, false);
        }
        let name = tuple_name([src.state_name(pair.0), subsets.name(pair.1).as_str()].into_iter());
        let i = cov.add_state(name).expect("pairs are distinct");
        cov.set_final(i, src.final_weight(pair.0).clone());
        pairs.push(pair);
        index.insert(pair, i);
        (i, true)
    };
    if let Some(j) = subsets.initial() {
        for p in src.initial_states() {
            let (i, _) = intern((p, j), &mut cov, &mut pairs);
            cov.set_initial(i, src.initial_weight(p).clone());
            queue.push_back(i);
        }
    }
    while let Some(s) = queue.pop_front() {
        let (p, set) = pairs[s];
        for l in 0..src.alphabet().len() {
            let Some(next) = subsets.next(set, l) else { continue };
            for &t in src.outgoing(p) {
                let tr = src.transition(t);
                if tr.label != l {
                    continue;
                }
                let (d, fresh) = intern((tr.to, next), &mut cov, &mut pairs);
                if fresh {
                    queue.push_back(d);
                }
                cov.add_transition(s, l, tr.weight.clone(), d).expect("one arc per source arc");
                origin.push(t);
            }
        }
    }
    // The accessible part is already co-accessible because `src` is trim.
    debug_assert!(cov.is_trim());
    Covering { automaton: cov, subsets, pairs, origin, source: src }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CompetingKind {
    Transitions,
    Finals,
}

/// A maximal set of competing covering transitions or final states, in
/// canonical order (by name of the originating state).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompetingSet {
    pub kind: CompetingKind,
    /// Covering transition ids or covering state ids, depending on `kind`.
    pub members: Vec<usize>,
}

impl CompetingSet {
    /// Human-readable members: "from -label-> to" or state names.
    pub fn describe<S: Scalar>(&self, cov: &Covering<S>) -> Vec<String> {
        let a = &cov.automaton;
        self.members
            .iter()
            .map(|&m| match self.kind {
                CompetingKind::Transitions => {
                    let t = a.transition(m);
                    format!("{} -{}-> {}", a.state_name(t.from), a.alphabet()[t.label], a.state_name(t.to))
                }
                CompetingKind::Finals => a.state_name(m).to_string(),
            })
            .collect()
    }
}

/// Which covering transitions and final states are still present.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Mask {
    transitions: Vec<bool>,
    finals: Vec<bool>,
}

impl Mask {
    fn full<S: Scalar>(cov: &Covering<S>) -> Self {
        let a = &cov.automaton;
        Mask {
            transitions: vec![true; a.transitions().len()],
            finals: (0..a.num_states()).map(|s| a.final_weight(s).is_finite()).collect(),
        }
    }

    /// Drops whatever no longer lies on a successful path.
    fn trimmed<S: Scalar>(&self, cov: &Covering<S>) -> Mask {
        let a = &cov.automaton;
        let n = a.num_states();
        let edges: Vec<(usize, usize)> = a
            .transitions()
            .iter()
            .enumerate()
            .filter(|(i, _)| self.transitions[*i])
            .map(|(_, t)| (t.from, t.to))
            .collect();
        let fwd = Digraph::new(n, edges.clone());
        let bwd = Digraph::new(n, edges.iter().map(|&(u, v)| (v, u)).collect());
        let acc = fwd.reachable_from(a.initial_states());
        let co = bwd.reachable_from((0..n).filter(|&s| self.finals[s]));
        let live = |s: usize| acc[s] && co[s];
        Mask {
            transitions: a
                .transitions()
                .iter()
                .enumerate()
                .map(|(i, t)| self.transitions[i] && live(t.from) && live(t.to))
                .collect(),
            finals: (0..n).map(|s| self.finals[s] && live(s)).collect(),
        }
    }
}

fn competing_in<S: Scalar>(cov: &Covering<S>, mask: &Mask) -> Vec<CompetingSet> {
    let a = &cov.automaton;
    let mut tr_groups: BTreeMap<(Letter, usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, t) in a.transitions().iter().enumerate() {
        if mask.transitions[i] {
            tr_groups.entry((t.label, t.to, cov.column_of(t.from))).or_default().push(i);
        }
    }
    let mut fin_groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for s in (0..a.num_states()).filter(|&s| mask.finals[s]) {
        fin_groups.entry(cov.column_of(s)).or_default().push(s);
    }
    let mut sets = Vec::new();
    for mut members in tr_groups.into_values().filter(|m| m.len() >= 2) {
        members.sort_by(|&x, &y| a.state_name(a.transition(x).from).cmp(a.state_name(a.transition(y).from)));
        sets.push(CompetingSet { kind: CompetingKind::Transitions, members });
    }
    for mut members in fin_groups.into_values().filter(|m| m.len() >= 2) {
        members.sort_by(|&x, &y| a.state_name(x).cmp(a.state_name(y)));
        sets.push(CompetingSet { kind: CompetingKind::Finals, members });
    }
    sets
}

/// All maximal competing sets of the covering: transition sets first, then
/// final-state sets.
pub fn competing_sets<S: Scalar>(cov: &Covering<S>) -> Vec<CompetingSet> {
    competing_in(cov, &Mask::full(cov))
}

/// True iff no competing transition lies on a circuit of the covering.
pub fn check_decomposable<S: Scalar>(cov: &Covering<S>) -> bool {
    let a = &cov.automaton;
    let g = Digraph::new(a.num_states(), a.transitions().iter().map(|t| (t.from, t.to)).collect());
    let (_, comp) = g.sccs();
    competing_sets(cov)
        .iter()
        .filter(|x| x.kind == CompetingKind::Transitions)
        .flat_map(|x| &x.members)
        .all(|&t| comp[a.transition(t).from] != comp[a.transition(t).to])
}

/// Result of [`decompose_unambiguous`].
#[derive(Clone, Debug)]
pub struct Decomposition<S> {
    pub covering: Covering<S>,
    /// Competing sets of the full covering.
    pub competing: Vec<CompetingSet>,
    pub leaves: Vec<WeightedAutomaton<S>>,
}

/// Splits a finitely ambiguous automaton into unambiguous automata with
/// the same support whose pointwise maximum is the original series.
pub fn decompose_unambiguous<S: Scalar>(a: &WeightedAutomaton<S>) -> Result<Decomposition<S>> {
    decompose_with_cap(a, DEFAULT_LEAF_CAP)
}

pub fn decompose_with_cap<S: Scalar>(a: &WeightedAutomaton<S>, leaf_cap: usize) -> Result<Decomposition<S>> {
    if let Some(w) = is_infinitely_ambiguous(a) {
        return Err(Error::InfinitelyAmbiguous { p: w.p, q: w.q, word: w.word });
    }
    let covering = schutzenberger_covering(a);
    let competing = competing_sets(&covering);
    let mut masks = Vec::new();
    split(&covering, Mask::full(&covering), &mut masks, leaf_cap)?;
    let mut leaves = Vec::with_capacity(masks.len());
    for mask in &masks {
        leaves.push(materialize(&covering, mask));
    }
    post_check(&covering.source, &leaves)?;
    Ok(Decomposition { covering, competing, leaves })
}

fn split<S: Scalar>(cov: &Covering<S>, mask: Mask, out: &mut Vec<Mask>, cap: usize) -> Result<()> {
    let mask = mask.trimmed(cov);
    let sets = competing_in(cov, &mask);
    if sets.is_empty() {
        if out.len() >= cap {
            return Err(Error::CapExceeded { what: "decomposition leaf count".into(), cap });
        }
        out.push(mask);
        return Ok(());
    }
    let chosen = select_sets(cov, &mask, &sets);
    let mut copies = vec![mask];
    for x in chosen {
        let mut next = Vec::with_capacity(copies.len() * 2);
        for c in copies {
            let (keep, drop) = (x.members[0], &x.members[1..]);
            let mut s1 = c.clone();
            let mut s2 = c;
            match x.kind {
                CompetingKind::Transitions => {
                    drop.iter().for_each(|&m| s1.transitions[m] = false);
                    s2.transitions[keep] = false;
                }
                CompetingKind::Finals => {
                    drop.iter().for_each(|&m| s1.finals[m] = false);
                    s2.finals[keep] = false;
                }
            }
            next.push(s1);
            next.push(s2);
        }
        copies = next;
    }
    for c in copies {
        split(cov, c, out, cap)?;
    }
    Ok(())
}

/// The competing sets processed at one recursion level: those whose
/// elements reach no element of another set. When every set reaches
/// another one, a single set from a terminal class is used instead.
fn select_sets<'s, S: Scalar>(cov: &Covering<S>, mask: &Mask, sets: &'s [CompetingSet]) -> Vec<&'s CompetingSet> {
    let a = &cov.automaton;
    let n = a.num_states();
    let edges: Vec<(usize, usize)> =
        a.transitions().iter().enumerate().filter(|(i, _)| mask.transitions[*i]).map(|(_, t)| (t.from, t.to)).collect();
    let g = Digraph::new(n, edges);
    // Where reaching an element starts and where it must arrive.
    let start = |x: &CompetingSet, m: usize| match x.kind {
        CompetingKind::Transitions => a.transition(m).to,
        CompetingKind::Finals => m,
    };
    let target = |x: &CompetingSet, m: usize| match x.kind {
        CompetingKind::Transitions => a.transition(m).from,
        CompetingKind::Finals => m,
    };
    let k = sets.len();
    let mut reaches = vec![vec![false; k]; k];
    for (i, x) in sets.iter().enumerate() {
        let seen = g.reachable_from(x.members.iter().map(|&m| start(x, m)));
        for (j, y) in sets.iter().enumerate() {
            reaches[i][j] = i != j && y.members.iter().any(|&m| seen[target(y, m)]);
        }
    }
    let maximal: Vec<&CompetingSet> = (0..k).filter(|&i| !reaches[i].contains(&true)).map(|i| &sets[i]).collect();
    if !maximal.is_empty() {
        return maximal;
    }
    let pairs: Vec<(usize, usize)> =
        (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).filter(|&(i, j)| reaches[i][j]).collect();
    let rel = Digraph::new(k, pairs);
    let (comps, comp_of) = rel.sccs();
    let succ = rel.condensation(&comp_of, comps.len());
    let sink = (0..comps.len()).find(|&c| succ[c].is_empty()).expect("a finite DAG has a sink");
    vec![&sets[comps[sink][0]]]
}

fn materialize<S: Scalar>(cov: &Covering<S>, mask: &Mask) -> WeightedAutomaton<S> {
    let a = &cov.automaton;
    let mut out = a.empty_like();
    for s in 0..a.num_states() {
        let id = out.add_state(a.state_name(s)).expect("names are unique");
        out.set_initial(id, a.initial_weight(s).clone());
        if mask.finals[s] {
            out.set_final(id, a.final_weight(s).clone());
        }
    }
    for (i, t) in a.transitions().iter().enumerate() {
        if mask.transitions[i] {
            out.add_transition(t.from, t.label, t.weight.clone(), t.to).expect("no duplicates in covering");
        }
    }
    out.trim()
}

fn post_check<S: Scalar>(source: &WeightedAutomaton<S>, leaves: &[WeightedAutomaton<S>]) -> Result<()> {
    let reference = source.sample_series(POST_CHECK_BOUND);
    for (i, leaf) in leaves.iter().enumerate() {
        let (paths, word) = leaf.max_paths_up_to(POST_CHECK_BOUND);
        if paths > 1 {
            return Err(Error::Verification(format!(
                "leaf {i} carries {paths} paths on `{}`",
                format_word(leaf.alphabet(), &word)
            )));
        }
        let sample = leaf.sample_series(POST_CHECK_BOUND);
        if let Some((w, _)) =
            reference.entries.iter().find(|(w, x)| x.is_finite() != sample.get(w).is_some_and(MaxPlus::is_finite))
        {
            return Err(Error::Verification(format!(
                "leaf {i} has a different support on `{}`",
                format_word(leaf.alphabet(), w)
            )));
        }
    }
    debug_assert!(leaves.iter().all(|l| degree_up_to(l, POST_CHECK_BOUND) <= 1));
    Ok(())
}
