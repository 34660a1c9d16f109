//! The product automaton of a same-support family of unambiguous automata,
//! victorious coordinates and the dominance property.
//!
//! The product runs all members in lockstep with weights in R_max^I. A
//! coordinate is victorious on a circuit when it carries the largest weight
//! there; for a strongly connected component the victorious set is the
//! intersection over its simple circuits, and for a path the intersection
//! over the components it visits. The dominance property asks every
//! successful path to keep at least one victorious coordinate.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::automaton::{cartesian, format_word, tuple_name, Letter, WeightedAutomaton, Word};
use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::scalar::Scalar;
use crate::weight::{MaxPlus, MaxPlusTuple};

/// Length at which the family is checked for unambiguity and equal support.
pub const GUARD_BOUND: usize = 6;
pub const DEFAULT_CIRCUIT_CAP: usize = 1_000_000;
pub const MAX_MEMBERS: usize = 64;

/// Coordinates as a bit set over the family index.
pub type CoordSet = u64;

pub fn coord_list(set: CoordSet) -> Vec<usize> {
    (0..MAX_MEMBERS).filter(|i| set >> i & 1 == 1).collect()
}

fn full_set(n: usize) -> CoordSet {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductTransition<S> {
    pub from: usize,
    pub label: Letter,
    /// Every coordinate finite.
    pub weight: MaxPlusTuple<S>,
    pub to: usize,
}

#[derive(Clone, Debug)]
pub struct ProductAutomaton<S> {
    alphabet: Vec<String>,
    members: Vec<WeightedAutomaton<S>>,
    tuples: Vec<Vec<usize>>,
    names: Vec<String>,
    initial: Vec<Option<MaxPlusTuple<S>>>,
    terminal: Vec<Option<MaxPlusTuple<S>>>,
    transitions: Vec<ProductTransition<S>>,
    out: Vec<Vec<usize>>,
}

impl<S: Scalar> ProductAutomaton<S> {
    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    /// The trimmed family members, indexed by coordinate.
    pub fn members(&self) -> &[WeightedAutomaton<S>] {
        &self.members
    }

    pub fn dimension(&self) -> usize {
        self.members.len()
    }

    pub fn num_states(&self) -> usize {
        self.tuples.len()
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.names[s]
    }

    /// Member states making up product state `s`.
    pub fn tuple(&self, s: usize) -> &[usize] {
        &self.tuples[s]
    }

    pub fn initial_weight(&self, s: usize) -> Option<&MaxPlusTuple<S>> {
        self.initial[s].as_ref()
    }

    pub fn final_weight(&self, s: usize) -> Option<&MaxPlusTuple<S>> {
        self.terminal[s].as_ref()
    }

    pub fn initial_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states()).filter(|&s| self.initial[s].is_some())
    }

    pub fn final_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states()).filter(|&s| self.terminal[s].is_some())
    }

    pub fn transitions(&self) -> &[ProductTransition<S>] {
        &self.transitions
    }

    pub fn outgoing(&self, s: usize) -> &[usize] {
        &self.out[s]
    }

    pub fn graph(&self) -> Digraph {
        Digraph::new(self.num_states(), self.transitions.iter().map(|t| (t.from, t.to)).collect())
    }

    /// Coordinate-wise max over all successful paths labelled `word`; all
    /// ⊥ when there is none.
    pub fn evaluate(&self, word: &[Letter]) -> MaxPlusTuple<S> {
        let n = self.dimension();
        let mut v: Vec<Option<MaxPlusTuple<S>>> = self.initial.clone();
        for &l in word {
            let mut next: Vec<Option<MaxPlusTuple<S>>> = vec![None; self.num_states()];
            for t in self.transitions.iter().filter(|t| t.label == l) {
                if let Some(x) = &v[t.from] {
                    let y = x.times(&t.weight).expect("same dimension");
                    next[t.to] = Some(match next[t.to].take() {
                        Some(z) => coordinatewise_max(&z, &y),
                        None => y,
                    });
                }
            }
            v = next;
        }
        let mut acc = MaxPlusTuple::bottom(n);
        for (x, b) in v.iter().zip(&self.terminal) {
            if let (Some(x), Some(b)) = (x, b) {
                acc = coordinatewise_max(&acc, &x.times(b).expect("same dimension"));
            }
        }
        acc
    }
}

fn coordinatewise_max<S: Scalar>(x: &MaxPlusTuple<S>, y: &MaxPlusTuple<S>) -> MaxPlusTuple<S> {
    MaxPlusTuple::new(x.coords().iter().zip(y.coords()).map(|(a, b)| a.plus(b)).collect())
}

/// Checks the family guards: non-empty, common alphabet, each member
/// unambiguous and all supports equal up to [`GUARD_BOUND`].
pub fn check_family<S: Scalar>(family: &[WeightedAutomaton<S>]) -> Result<()> {
    let first = family.first().ok_or(Error::EmptyFamily)?;
    if family.len() > MAX_MEMBERS {
        return Err(Error::TooManyMembers(family.len()));
    }
    let reference = first.sample_series(GUARD_BOUND);
    for (i, a) in family.iter().enumerate() {
        if a.alphabet() != first.alphabet() {
            return Err(Error::AlphabetMismatch { left: first.alphabet().to_vec(), right: a.alphabet().to_vec() });
        }
        let (paths, word) = a.max_paths_up_to(GUARD_BOUND);
        if paths > 1 {
            return Err(Error::AmbiguousMember { index: i, word: a.format_word(&word), paths });
        }
        if i > 0 {
            let sample = a.sample_series(GUARD_BOUND);
            if let Some((w, _)) =
                reference.entries.iter().find(|(w, x)| x.is_finite() != sample.get(w).is_some_and(MaxPlus::is_finite))
            {
                return Err(Error::SupportMismatch { index: i, word: a.format_word(w) });
            }
        }
    }
    Ok(())
}

/// Builds the trim product automaton of `family`.
pub fn product<S: Scalar>(family: &[WeightedAutomaton<S>]) -> Result<ProductAutomaton<S>> {
    check_family(family)?;
    let members: Vec<WeightedAutomaton<S>> = family.iter().map(WeightedAutomaton::trim).collect();
    let k = members.len();
    let alphabet = members[0].alphabet().to_vec();

    let mut tuples: Vec<Vec<usize>> = Vec::new();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut edges: Vec<(usize, Letter, MaxPlusTuple<S>, usize)> = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |t: Vec<usize>, tuples: &mut Vec<Vec<usize>>, queue: &mut VecDeque<usize>| -> usize {
        *index.entry(t.clone()).or_insert_with(|| {
            tuples.push(t);
            queue.push_back(tuples.len() - 1);
            tuples.len() - 1
        })
    };
    let starts: Vec<Vec<usize>> = members.iter().map(|m| m.initial_states().collect()).collect();
    for t in cartesian(&starts) {
        intern(t, &mut tuples, &mut queue);
    }
    while let Some(s) = queue.pop_front() {
        for l in 0..alphabet.len() {
            let choices: Vec<Vec<usize>> = tuples[s]
                .iter()
                .enumerate()
                .map(|(i, &p)| {
                    members[i].outgoing(p).iter().copied().filter(|&t| members[i].transition(t).label == l).collect()
                })
                .collect();
            if choices.iter().any(Vec::is_empty) {
                continue;
            }
            for combo in cartesian(&choices) {
                let to: Vec<usize> = combo.iter().enumerate().map(|(i, &t)| members[i].transition(t).to).collect();
                let w = MaxPlusTuple::from_finite(
                    combo.iter().enumerate().map(|(i, &t)| members[i].transition(t).weight.clone()),
                );
                let d = intern(to, &mut tuples, &mut queue);
                edges.push((s, l, w, d));
            }
        }
    }

    let all = |s: &[usize], f: &dyn Fn(&WeightedAutomaton<S>, usize) -> MaxPlus<S>| -> Option<MaxPlusTuple<S>> {
        let t = MaxPlusTuple::new(s.iter().enumerate().map(|(i, &p)| f(&members[i], p)).collect());
        t.is_all_finite().then_some(t)
    };
    let initial: Vec<Option<MaxPlusTuple<S>>> =
        tuples.iter().map(|s| all(s, &|m, p| m.initial_weight(p).clone())).collect();
    let terminal: Vec<Option<MaxPlusTuple<S>>> =
        tuples.iter().map(|s| all(s, &|m, p| m.final_weight(p).clone())).collect();

    // Keep what is co-accessible to an all-final tuple.
    let n = tuples.len();
    let back = Digraph::new(n, edges.iter().map(|e| (e.3, e.0)).collect());
    let live = back.reachable_from((0..n).filter(|&s| terminal[s].is_some()));
    let mut renumber = vec![usize::MAX; n];
    let mut out = ProductAutomaton {
        alphabet,
        tuples: Vec::new(),
        names: Vec::new(),
        initial: Vec::new(),
        terminal: Vec::new(),
        transitions: Vec::new(),
        out: Vec::new(),
        members,
    };
    for s in (0..n).filter(|&s| live[s]) {
        renumber[s] = out.tuples.len();
        out.names.push(if k == 1 {
            out.members[0].state_name(tuples[s][0]).to_string()
        } else {
            tuple_name(tuples[s].iter().enumerate().map(|(i, &p)| out.members[i].state_name(p)))
        });
        out.tuples.push(tuples[s].clone());
        out.initial.push(initial[s].clone());
        out.terminal.push(terminal[s].clone());
        out.out.push(Vec::new());
    }
    for (from, label, weight, to) in edges {
        if live[from] && live[to] {
            let (from, to) = (renumber[from], renumber[to]);
            out.out[from].push(out.transitions.len());
            out.transitions.push(ProductTransition { from, label, weight, to });
        }
    }
    Ok(out)
}

/// Arg-max coordinates of a tuple; ⊥ coordinates never win.
pub fn victorious<S: Scalar>(x: &MaxPlusTuple<S>) -> Vec<usize> {
    coord_list(victorious_set(x))
}

fn victorious_set<S: Scalar>(x: &MaxPlusTuple<S>) -> CoordSet {
    let Some(best) = x.coords().iter().max().filter(|m| m.is_finite()) else { return 0 };
    x.coords().iter().enumerate().filter(|(_, c)| *c == best).fold(0, |acc, (i, _)| acc | 1 << i)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit<S> {
    /// Product transition ids, in order along the circuit.
    pub transitions: Vec<usize>,
    pub weight: MaxPlusTuple<S>,
    pub victorious: CoordSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccInfo<S> {
    pub states: Vec<usize>,
    pub circuits: Vec<Circuit<S>>,
    /// Intersection over the circuits; every coordinate when there is none.
    pub victorious: CoordSet,
}

/// Strongly connected components of the product, sinks first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccReport<S> {
    pub sccs: Vec<SccInfo<S>>,
    pub comp_of: Vec<usize>,
    /// Condensation edges.
    pub dag: Vec<BTreeSet<usize>>,
}

impl<S: Scalar> SccReport<S> {
    pub fn victorious_of_state(&self, s: usize) -> CoordSet {
        self.sccs[self.comp_of[s]].victorious
    }
}

pub fn analyze_sccs<S: Scalar>(p: &ProductAutomaton<S>) -> Result<SccReport<S>> {
    analyze_sccs_with_cap(p, DEFAULT_CIRCUIT_CAP)
}

pub fn analyze_sccs_with_cap<S: Scalar>(p: &ProductAutomaton<S>, cap: usize) -> Result<SccReport<S>> {
    let g = p.graph();
    let (comps, comp_of) = g.sccs();
    let dag = g.condensation(&comp_of, comps.len());
    let all = full_set(p.dimension());
    let mut sccs = Vec::with_capacity(comps.len());
    let mut budget = cap;
    for states in comps {
        let circuits: Vec<Circuit<S>> = g
            .elementary_circuits(&states, budget)
            .map_err(|_| Error::CapExceeded { what: "simple circuit enumeration".into(), cap })?
            .into_iter()
            .map(|transitions| {
                let weight =
                    transitions.iter().fold(MaxPlusTuple::from_finite(vec![S::zero(); p.dimension()]), |acc, &t| {
                        acc.times(&p.transitions[t].weight).expect("same dimension")
                    });
                let victorious = victorious_set(&weight);
                Circuit { transitions, weight, victorious }
            })
            .collect();
        budget -= circuits.len();
        let victorious = circuits.iter().fold(all, |acc, c| acc & c.victorious);
        sccs.push(SccInfo { states, circuits, victorious });
    }
    Ok(SccReport { sccs, comp_of, dag })
}

/// A successful path of the product whose visited components have no
/// victorious coordinate in common.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominanceWitness {
    pub states: Vec<String>,
    pub word: String,
    #[serde(skip)]
    pub letters: Word,
    #[serde(skip)]
    pub path: Vec<usize>,
    /// Components touched by the path, in order of first visit.
    pub components: Vec<usize>,
}

impl DominanceWitness {
    /// Re-checks that the path is successful in `p` and that the visited
    /// components intersect to ∅.
    pub fn replay<S: Scalar>(&self, p: &ProductAutomaton<S>, report: &SccReport<S>) -> bool {
        let Some(first) = self.states.first() else { return false };
        let Some(start) = (0..p.num_states()).find(|&s| p.state_name(s) == first.as_str()) else { return false };
        if p.initial_weight(start).is_none() {
            return false;
        }
        let mut cur = start;
        let mut inter = report.victorious_of_state(cur);
        for &t in &self.path {
            let tr = &p.transitions()[t];
            if tr.from != cur {
                return false;
            }
            cur = tr.to;
            inter &= report.victorious_of_state(cur);
        }
        let labels: Word = self.path.iter().map(|&t| p.transitions()[t].label).collect();
        p.final_weight(cur).is_some() && inter == 0 && labels == self.letters
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominanceResult {
    pub holds: bool,
    pub witness: Option<DominanceWitness>,
}

/// Decides the dominance property by propagating the reachable
/// intersections along the condensation, sources first.
pub fn satisfies_dominance<S: Scalar>(p: &ProductAutomaton<S>, report: &SccReport<S>) -> DominanceResult {
    let k = report.sccs.len();
    // Per component: reachable intersection ↦ (previous component, its intersection).
    let mut reach: Vec<HashMap<CoordSet, Option<(usize, CoordSet)>>> = vec![HashMap::new(); k];
    for s in p.initial_states() {
        let c = report.comp_of[s];
        reach[c].entry(report.sccs[c].victorious).or_insert(None);
    }
    let mut failure = None;
    for c in (0..k).rev() {
        let mut sets: Vec<CoordSet> = reach[c].keys().copied().collect();
        sets.sort_unstable();
        if sets.first() == Some(&0) {
            failure = Some(c);
            break;
        }
        for &d in &report.dag[c] {
            for &m in &sets {
                reach[d].entry(m & report.sccs[d].victorious).or_insert(Some((c, m)));
            }
        }
    }
    let Some(end) = failure else { return DominanceResult { holds: true, witness: None } };

    let mut chain = vec![end];
    let mut key = (end, 0);
    while let Some(Some(prev)) = reach[key.0].get(&key.1) {
        chain.push(prev.0);
        key = *prev;
    }
    chain.reverse();
    let witness = realize_chain(p, report, &chain);
    DominanceResult { holds: false, witness: Some(witness) }
}

/// A concrete successful path through the components of `chain`, in order.
fn realize_chain<S: Scalar>(p: &ProductAutomaton<S>, report: &SccReport<S>, chain: &[usize]) -> DominanceWitness {
    let start =
        p.initial_states().find(|&s| report.comp_of[s] == chain[0]).expect("chain starts at an initial component");
    let mut path: Vec<usize> = Vec::new();
    let mut cur = start;
    for &next in &chain[1..] {
        let here = report.comp_of[cur];
        let leg = bfs(p, cur, |s| report.comp_of[s] == here, |t| report.comp_of[p.transitions()[t].to] == next)
            .expect("condensation edge is realized by a transition");
        cur = p.transitions()[*leg.last().expect("non-empty leg")].to;
        path.extend(leg);
    }
    if p.final_weight(cur).is_none() {
        let tail = bfs(p, cur, |_| true, |t| p.final_weight(p.transitions()[t].to).is_some()).expect("trim product");
        path.extend(tail);
    }
    let mut states = vec![p.state_name(start).to_string()];
    let mut components = vec![report.comp_of[start]];
    for &t in &path {
        let to = p.transitions()[t].to;
        states.push(p.state_name(to).to_string());
        if !components.contains(&report.comp_of[to]) {
            components.push(report.comp_of[to]);
        }
    }
    let letters: Word = path.iter().map(|&t| p.transitions()[t].label).collect();
    DominanceWitness { states, word: format_word(p.alphabet(), &letters), letters, path, components }
}

/// Shortest transition sequence from `from` whose intermediate states
/// satisfy `inside` and whose last transition satisfies `done`.
fn bfs<S: Scalar>(
    p: &ProductAutomaton<S>,
    from: usize,
    inside: impl Fn(usize) -> bool,
    done: impl Fn(usize) -> bool,
) -> Option<Vec<usize>> {
    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut seen = vec![false; p.num_states()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &t in p.outgoing(u) {
            let v = p.transitions()[t].to;
            if done(t) {
                let mut path = vec![t];
                let mut x = u;
                while x != from {
                    let e = parent[&x];
                    path.push(e);
                    x = p.transitions()[e].from;
                }
                path.reverse();
                return Some(path);
            }
            if !seen[v] && inside(v) {
                seen[v] = true;
                parent.insert(v, t);
                queue.push_back(v);
            }
        }
    }
    None
}

/// Checks on every word up to `bound` in the common support that the
/// product accumulates exactly the member coefficients.
pub fn verify_product<S: Scalar>(p: &ProductAutomaton<S>, bound: usize) -> Result<()> {
    let samples: Vec<_> = p.members().iter().map(|m| m.sample_series(bound)).collect();
    let Some(first) = samples.first() else { return Ok(()) };
    for w in first.support() {
        let got = p.evaluate(w);
        for (i, s) in samples.iter().enumerate() {
            if got.get(i) != &s.entries[w] {
                return Err(Error::Verification(format!(
                    "product coordinate {i} disagrees on `{}`",
                    format_word(p.alphabet(), w)
                )));
            }
        }
    }
    Ok(())
}
