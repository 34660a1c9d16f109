//! Twin property, weighted determinization and the prefix distance.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use crate::automaton::{format_word, Letter, WeightedAutomaton, Word};
use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::scalar::Scalar;
use crate::weight::MaxPlus;

pub const DEFAULT_DETERMINIZATION_CAP: usize = 10_000;

/// |u| + |v| − 2|u ∧ v|, with u ∧ v the longest common prefix.
pub fn prefix_distance(u: &[Letter], v: &[Letter]) -> usize {
    let common = u.iter().zip(v).take_while(|(a, b)| a == b).count();
    u.len() + v.len() - 2 * common
}

/// The pair of support words realizing the largest ratio
/// |⟨S,u⟩ − ⟨S,v⟩| / d(u,v) up to a length bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LipschitzScan<S> {
    pub difference: S,
    pub distance: usize,
    pub u: Word,
    pub v: Word,
}

impl<S: Scalar> LipschitzScan<S> {
    /// The ratio itself; exact when `S` is a field.
    pub fn ratio(&self) -> S {
        self.difference.clone() / S::from_usize(self.distance).expect("distance fits the scalar")
    }
}

/// Scans every pair of distinct support words of length at most `bound`.
/// `None` when the support has fewer than two such words.
pub fn lipschitz_scan<S: Scalar>(a: &WeightedAutomaton<S>, bound: usize) -> Option<LipschitzScan<S>> {
    let sample = a.sample_series(bound);
    let support: Vec<(&Word, &S)> = sample.entries.iter().filter_map(|(w, x)| x.value().map(|v| (w, v))).collect();
    let mut best: Option<LipschitzScan<S>> = None;
    for (i, (u, su)) in support.iter().enumerate() {
        for (v, sv) in &support[i + 1..] {
            let difference = ((*su).clone() - (*sv).clone()).abs();
            let distance = prefix_distance(u, v);
            let better = best.as_ref().is_none_or(|b| {
                difference.clone() * S::from_usize(b.distance).expect("fits")
                    > b.difference.clone() * S::from_usize(distance).expect("fits")
            });
            if better {
                best = Some(LipschitzScan { difference, distance, u: (*u).clone(), v: (*v).clone() });
            }
        }
    }
    best
}

/// Two states reached by a common word that carry different weights around
/// a common cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwinWitness<S> {
    pub p: usize,
    pub q: usize,
    pub u1: Word,
    pub u2: Word,
    /// Cycle weights p →u₂ p and q →u₂ q.
    pub x2: S,
    pub y2: S,
    /// Transition ids of both cycles, in the analyzed (trimmed) automaton.
    pub cycle_p: Vec<usize>,
    pub cycle_q: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwinReport<S> {
    pub twins: bool,
    pub witness: Option<TwinWitness<S>>,
    /// The trimmed automaton the witness refers to.
    pub automaton: WeightedAutomaton<S>,
}

/// Serializable view of a twin witness with names and words spelled out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwinSummary {
    pub p: String,
    pub q: String,
    pub u1: String,
    pub u2: String,
    pub x2: String,
    pub y2: String,
}

impl<S: Scalar> TwinReport<S> {
    pub fn summary(&self) -> Option<TwinSummary> {
        let a = &self.automaton;
        self.witness.as_ref().map(|w| TwinSummary {
            p: a.state_name(w.p).to_string(),
            q: a.state_name(w.q).to_string(),
            u1: a.format_word(&w.u1),
            u2: a.format_word(&w.u2),
            x2: w.x2.to_string(),
            y2: w.y2.to_string(),
        })
    }

    /// Replays the witness: u₁ reaches both p and q from initial states, both
    /// cycles are labelled u₂ and their weights differ as reported.
    pub fn replay(&self) -> bool {
        let Some(w) = &self.witness else { return self.twins };
        let a = &self.automaton;
        let reaches = |target: usize| -> bool {
            let mut cur: Vec<bool> = (0..a.num_states()).map(|s| a.initial_weight(s).is_finite()).collect();
            for &l in &w.u1 {
                let mut next = vec![false; a.num_states()];
                for t in a.transitions().iter().filter(|t| t.label == l && cur[t.from]) {
                    next[t.to] = true;
                }
                cur = next;
            }
            cur[target]
        };
        let cycle = |ids: &[usize], at: usize| -> Option<S> {
            let mut cur = at;
            let mut sum = S::zero();
            for (&t, &l) in ids.iter().zip(&w.u2) {
                let tr = a.transition(t);
                if tr.from != cur || tr.label != l {
                    return None;
                }
                sum = sum + tr.weight.clone();
                cur = tr.to;
            }
            (cur == at && ids.len() == w.u2.len()).then_some(sum)
        };
        !self.twins
            && !w.u2.is_empty()
            && reaches(w.p)
            && reaches(w.q)
            && cycle(&w.cycle_p, w.p) == Some(w.x2.clone())
            && cycle(&w.cycle_q, w.q) == Some(w.y2.clone())
            && w.x2 != w.y2
    }
}

struct PairEdge<S> {
    from: usize,
    to: usize,
    label: Letter,
    delta: S,
    left: usize,
    right: usize,
}

/// Decides the twin property on the trim part of `a` through the pair
/// graph of states reachable by a common word.
pub fn twin_property<S: Scalar>(a: &WeightedAutomaton<S>) -> TwinReport<S> {
    let a = a.trim();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut access: Vec<Option<(usize, Letter)>> = Vec::new();
    let mut edges: Vec<PairEdge<S>> = Vec::new();
    let mut queue = VecDeque::new();
    let initials: Vec<usize> = a.initial_states().collect();
    for &i in &initials {
        for &j in &initials {
            index.insert((i, j), pairs.len());
            pairs.push((i, j));
            access.push(None);
            queue.push_back(pairs.len() - 1);
        }
    }
    while let Some(n) = queue.pop_front() {
        let (p, q) = pairs[n];
        for l in 0..a.alphabet().len() {
            for &tp in a.outgoing(p) {
                let x = a.transition(tp);
                if x.label != l {
                    continue;
                }
                for &tq in a.outgoing(q) {
                    let y = a.transition(tq);
                    if y.label != l {
                        continue;
                    }
                    let key = (x.to, y.to);
                    let to = *index.entry(key).or_insert_with(|| {
                        pairs.push(key);
                        access.push(Some((n, l)));
                        queue.push_back(pairs.len() - 1);
                        pairs.len() - 1
                    });
                    edges.push(PairEdge {
                        from: n,
                        to,
                        label: l,
                        delta: x.weight.clone() - y.weight.clone(),
                        left: tp,
                        right: tq,
                    });
                }
            }
        }
    }

    let g = Digraph::new(pairs.len(), edges.iter().map(|e| (e.from, e.to)).collect());
    let (comps, comp_of) = g.sccs();
    let mut order: Vec<&Vec<usize>> = comps.iter().collect();
    order.sort_by_key(|c| c[0]);
    for comp in order {
        let root = comp[0];
        let inside = |e: &PairEdge<S>| comp_of[e.from] == comp_of[root] && comp_of[e.to] == comp_of[root];
        // Spanning tree of the component from its root.
        let mut pot: BTreeMap<usize, S> = BTreeMap::from([(root, S::zero())]);
        let mut tree: HashMap<usize, usize> = HashMap::new();
        let mut todo = VecDeque::from([root]);
        while let Some(u) = todo.pop_front() {
            for &e in g.out_edges(u) {
                let edge = &edges[e];
                if inside(edge) && !pot.contains_key(&edge.to) {
                    pot.insert(edge.to, pot[&u].clone() + edge.delta.clone());
                    tree.insert(edge.to, e);
                    todo.push_back(edge.to);
                }
            }
        }
        let bad =
            edges.iter().enumerate().find(|(_, e)| inside(e) && pot[&e.to] != pot[&e.from].clone() + e.delta.clone());
        let Some((e, _)) = bad else { continue };

        let tree_path = |mut v: usize| -> Vec<usize> {
            let mut path = Vec::new();
            while v != root {
                let e = tree[&v];
                path.push(e);
                v = edges[e].from;
            }
            path.reverse();
            path
        };
        let back_to_root = |v: usize| -> Vec<usize> { shortest_within(&g, &comp_of, v, root) };
        let through = [tree_path(edges[e].from), vec![e], back_to_root(edges[e].to)].concat();
        let plain = [tree_path(edges[e].to), back_to_root(edges[e].to)].concat();
        let total = |c: &[usize]| c.iter().fold(S::zero(), |acc, &i| acc + edges[i].delta.clone());
        let cycle = if total(&through) != S::zero() { through } else { plain };
        debug_assert!(total(&cycle) != S::zero());

        let mut u1 = Vec::new();
        let mut v = root;
        while let Some((prev, l)) = access[v] {
            u1.push(l);
            v = prev;
        }
        u1.reverse();
        let cycle_p: Vec<usize> = cycle.iter().map(|&i| edges[i].left).collect();
        let cycle_q: Vec<usize> = cycle.iter().map(|&i| edges[i].right).collect();
        let sum = |ids: &[usize]| ids.iter().fold(S::zero(), |acc, &t| acc + a.transition(t).weight.clone());
        let witness = TwinWitness {
            p: pairs[root].0,
            q: pairs[root].1,
            u1,
            u2: cycle.iter().map(|&i| edges[i].label).collect(),
            x2: sum(&cycle_p),
            y2: sum(&cycle_q),
            cycle_p,
            cycle_q,
        };
        return TwinReport { twins: false, witness: Some(witness), automaton: a };
    }
    TwinReport { twins: true, witness: None, automaton: a }
}

/// Shortest edge path from `from` to `to` staying inside their component.
fn shortest_within(g: &Digraph, comp_of: &[usize], from: usize, to: usize) -> Vec<usize> {
    if from == to {
        return Vec::new();
    }
    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = vec![false; g.node_count()];
    seen[from] = true;
    while let Some(u) = queue.pop_front() {
        for &e in g.out_edges(u) {
            let v = g.edge(e).1;
            if comp_of[v] != comp_of[from] || seen[v] {
                continue;
            }
            seen[v] = true;
            parent.insert(v, e);
            if v == to {
                let mut path = vec![e];
                let mut x = u;
                while x != from {
                    let p = parent[&x];
                    path.push(p);
                    x = g.edge(p).0;
                }
                path.reverse();
                return path;
            }
            queue.push_back(v);
        }
    }
    unreachable!("nodes of one component are mutually reachable")
}

/// Weighted subset construction. States are sets of (state, residual)
/// pairs with residuals normalized to a maximum of 0.
pub fn determinize_weighted<S: Scalar>(a: &WeightedAutomaton<S>, cap: usize) -> Result<WeightedAutomaton<S>> {
    let a = a.trim();
    let mut out = a.empty_like();
    let start: Vec<(usize, S)> =
        a.initial_states().map(|s| (s, a.initial_weight(s).value().cloned().expect("initial"))).collect();
    let Some(lambda) = start.iter().map(|(_, w)| w.clone()).max() else { return Ok(out) };

    type Subset<S> = Vec<(usize, S)>;
    let mut index: HashMap<Subset<S>, usize> = HashMap::new();
    let mut subsets: Vec<Subset<S>> = Vec::new();
    let mut intern = |set: Subset<S>, out: &mut WeightedAutomaton<S>, subsets: &mut Vec<Subset<S>>| -> Result<usize> {
        if let Some(&i) = index.get(&set) {
            return Ok(i);
        }
        if subsets.len() >= cap {
            return Err(Error::DeterminizationDiverged { cap });
        }
        let name = format!(
            "{{{}}}",
            set.iter().map(|(s, r)| format!("{}:{}", a.state_name(*s), r)).collect::<Vec<_>>().join(",")
        );
        let i = out.add_state(name)?;
        let rho = set.iter().fold(MaxPlus::Bottom, |acc, (s, r)| acc.plus(&a.final_weight(*s).times_scalar(r)));
        out.set_final(i, rho);
        index.insert(set.clone(), i);
        subsets.push(set);
        Ok(i)
    };

    let init = normalize(start, &lambda);
    let i = intern(init, &mut out, &mut subsets)?;
    out.set_initial(i, MaxPlus::Finite(lambda));
    // States are numbered in discovery order, so scanning them is a BFS.
    let mut s = 0;
    while s < subsets.len() {
        for l in 0..a.alphabet().len() {
            let mut next: BTreeMap<usize, S> = BTreeMap::new();
            for (p, r) in &subsets[s] {
                for &t in a.outgoing(*p) {
                    let tr = a.transition(t);
                    if tr.label != l {
                        continue;
                    }
                    let cand = r.clone() + tr.weight.clone();
                    next.entry(tr.to).and_modify(|x| *x = x.clone().max(cand.clone())).or_insert(cand);
                }
            }
            let Some(emit) = next.values().max().cloned() else { continue };
            let d = intern(normalize(next.into_iter().collect(), &emit), &mut out, &mut subsets)?;
            out.add_transition(s, l, emit, d)?;
        }
        s += 1;
    }
    Ok(out)
}

fn normalize<S: Scalar>(set: Vec<(usize, S)>, by: &S) -> Vec<(usize, S)> {
    let mut v: Vec<(usize, S)> = set.into_iter().map(|(s, r)| (s, r - by.clone())).collect();
    v.sort_by_key(|(s, _)| *s);
    v
}

/// Checks that `b` is structurally sequential and agrees with `a` on every
/// word of length at most `bound`.
pub fn verify_sequential<S: Scalar>(a: &WeightedAutomaton<S>, b: &WeightedAutomaton<S>, bound: usize) -> Result<()> {
    if !b.is_sequential() {
        return Err(Error::Verification("output is not sequential".into()));
    }
    let check = crate::ambiguity::equivalent_up_to(a, b, bound)?;
    match check.counterexample {
        Some(w) => {
            Err(Error::Verification(format!("sequential automaton differs on `{}`", format_word(a.alphabet(), &w))))
        }
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn distance_examples() {
        assert_eq!(prefix_distance(&[0, 1, 2], &[0, 1, 3]), 2);
        assert_eq!(prefix_distance(&[0, 1], &[0, 1]), 0);
        assert_eq!(prefix_distance(&[0], &[1, 1, 1]), 4);
    }

    #[test]
    fn fig3_twin_witness() {
        let a = fixtures::fig3_maxcount::<i64>();
        let r = twin_property(&a);
        assert!(!r.twins);
        let w = r.witness.clone().unwrap();
        assert_eq!((a.state_name(w.p), a.state_name(w.q)), ("A", "B"));
        assert!(w.u1.is_empty());
        assert_eq!(w.u2, vec![0]);
        assert_eq!((w.x2, w.y2), (1, 0));
        assert!(r.replay());
    }

    #[test]
    fn sequential_input_is_twin() {
        assert!(twin_property(&fixtures::count_a::<i64>()).twins);
    }

    #[test]
    fn branch_determinizes() {
        let a = fixtures::twin_branch::<i64>();
        assert!(twin_property(&a).twins);
        let d = determinize_weighted(&a, 100).unwrap();
        verify_sequential(&a, &d, 6).unwrap();
    }

    #[test]
    fn divergence_is_reported() {
        let err = determinize_weighted(&fixtures::fig3_maxcount::<i64>(), 50).unwrap_err();
        assert!(err.is_cap());
    }

    #[test]
    fn lipschitz_constant_of_fig3() {
        let s = lipschitz_scan(&fixtures::fig3_maxcount::<i64>(), 4).unwrap();
        assert_eq!((s.difference, s.distance), (1, 1));
        let z = lipschitz_scan(&fixtures::constant_zero::<i64>(), 3).unwrap();
        assert_eq!(z.difference, 0);
    }
}
