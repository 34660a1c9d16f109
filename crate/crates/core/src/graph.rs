//! Directed multigraph helpers: strongly connected components and
//! elementary circuit enumeration.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};

/// A directed multigraph on nodes `0..n`; edges keep their caller-side ids
/// by position.
#[derive(Clone, Debug)]
pub struct Digraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut out = vec![Vec::new(); n];
        for (id, &(u, _)) in edges.iter().enumerate() {
            out[u].push(id);
        }
        Digraph { n, edges, out }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn out_edges(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    /// Tarjan's algorithm, iterative. Components come out in reverse
    /// topological order (sinks first); the second vector maps nodes to
    /// component indices.
    pub fn sccs(&self) -> (Vec<Vec<usize>>, Vec<usize>) {
        const UNSEEN: usize = usize::MAX;
        let n = self.n;
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut comp_of = vec![UNSEEN; n];
        let mut counter = 0;

        for root in 0..n {
            if index[root] != UNSEEN {
                continue;
            }
            // (node, next out-edge position)
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if *pos < self.out[v].len() {
                    let w = self.edges[self.out[v][*pos]].1;
                    *pos += 1;
                    if index[w] == UNSEEN {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp_of[w] = comps.len();
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
        (comps, comp_of)
    }

    /// Edges between distinct components, deduplicated.
    pub fn condensation(&self, comp_of: &[usize], comp_count: usize) -> Vec<BTreeSet<usize>> {
        let mut succ = vec![BTreeSet::new(); comp_count];
        for &(u, v) in &self.edges {
            if comp_of[u] != comp_of[v] {
                succ[comp_of[u]].insert(comp_of[v]);
            }
        }
        succ
    }

    /// Nodes reachable from `sources` (including them).
    pub fn reachable_from(&self, sources: impl IntoIterator<Item = usize>) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut todo: Vec<usize> = Vec::new();
        for s in sources {
            if !seen[s] {
                seen[s] = true;
                todo.push(s);
            }
        }
        while let Some(u) = todo.pop() {
            for &e in &self.out[u] {
                let v = self.edges[e].1;
                if !seen[v] {
                    seen[v] = true;
                    todo.push(v);
                }
            }
        }
        seen
    }

    /// Every elementary circuit inside the node set `nodes`, as edge-id
    /// sequences. Parallel edges yield distinct circuits. Node-level circuits
    /// follow Johnson's algorithm; each is then expanded over the parallel
    /// edges between consecutive nodes. Fails once more than `cap` circuits
    /// have been produced.
    pub fn elementary_circuits(&self, nodes: &[usize], cap: usize) -> Result<Vec<Vec<usize>>> {
        let mut sorted: Vec<usize> = nodes.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let member: HashSet<usize> = sorted.iter().copied().collect();
        let mut out = Vec::new();

        for (k, &s) in sorted.iter().enumerate() {
            // Subgraph induced by sorted[k..]; restrict to s's component there.
            let allowed: HashSet<usize> = sorted[k..].iter().copied().collect();
            let comp = self.component_within(s, &allowed);
            if comp.is_empty() {
                continue;
            }
            let mut j = Johnson {
                graph: self,
                allowed: &comp,
                start: s,
                blocked: HashSet::new(),
                b_sets: std::collections::HashMap::new(),
                path: vec![s],
                found: Vec::new(),
            };
            j.circuit(s);
            for cycle in j.found {
                self.expand(&cycle, &mut out, cap)?;
            }
        }
        debug_assert!(out.iter().flatten().all(|&e| member.contains(&self.edges[e].0)));
        Ok(out)
    }

    /// The SCC of `s` in the subgraph induced by `allowed`, empty when `s`
    /// lies on no cycle there.
    fn component_within(&self, s: usize, allowed: &HashSet<usize>) -> HashSet<usize> {
        let fwd = self.reach_within(s, allowed, false);
        let bwd = self.reach_within(s, allowed, true);
        let comp: HashSet<usize> = fwd.intersection(&bwd).copied().collect();
        let has_cycle = self.out[s].iter().any(|&e| comp.contains(&self.edges[e].1));
        if has_cycle {
            comp
        } else {
            HashSet::new()
        }
    }

    fn reach_within(&self, s: usize, allowed: &HashSet<usize>, reverse: bool) -> HashSet<usize> {
        let mut seen = HashSet::from([s]);
        let mut todo = vec![s];
        while let Some(u) = todo.pop() {
            let next: Vec<usize> = if reverse {
                self.edges.iter().filter(|&&(_, v)| v == u).map(|&(a, _)| a).collect()
            } else {
                self.out[u].iter().map(|&e| self.edges[e].1).collect()
            };
            for v in next {
                if allowed.contains(&v) && seen.insert(v) {
                    todo.push(v);
                }
            }
        }
        seen
    }

    fn expand(&self, cycle: &[usize], out: &mut Vec<Vec<usize>>, cap: usize) -> Result<()> {
        let hops: Vec<Vec<usize>> = (0..cycle.len())
            .map(|i| {
                let (u, v) = (cycle[i], cycle[(i + 1) % cycle.len()]);
                self.out[u].iter().copied().filter(|&e| self.edges[e].1 == v).collect()
            })
            .collect();
        for combo in crate::automaton::cartesian(&hops) {
            if out.len() >= cap {
                return Err(Error::CapExceeded { what: "simple circuit enumeration".into(), cap });
            }
            out.push(combo);
        }
        Ok(())
    }
}

struct Johnson<'g> {
    graph: &'g Digraph,
    allowed: &'g HashSet<usize>,
    start: usize,
    blocked: HashSet<usize>,
    b_sets: std::collections::HashMap<usize, HashSet<usize>>,
    path: Vec<usize>,
    found: Vec<Vec<usize>>,
}

impl Johnson<'_> {
    fn successors(&self, v: usize) -> Vec<usize> {
        let mut s: Vec<usize> =
            self.graph.out[v].iter().map(|&e| self.graph.edges[e].1).filter(|w| self.allowed.contains(w)).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    fn unblock(&mut self, u: usize) {
        let mut todo = vec![u];
        while let Some(x) = todo.pop() {
            if self.blocked.remove(&x) {
                if let Some(set) = self.b_sets.remove(&x) {
                    todo.extend(set);
                }
            }
        }
    }

    fn circuit(&mut self, v: usize) -> bool {
        let mut closed = false;
        self.blocked.insert(v);
        for w in self.successors(v) {
            if w == self.start {
                self.found.push(self.path.clone());
                closed = true;
            } else if !self.blocked.contains(&w) {
                self.path.push(w);
                if self.circuit(w) {
                    closed = true;
                }
                self.path.pop();
            }
        }
        if closed {
            self.unblock(v);
        } else {
            for w in self.successors(v) {
                self.b_sets.entry(w).or_default().insert(v);
            }
        }
        closed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tarjan_finds_components() {
        // 0 <-> 1 -> 2 -> 3 -> 2
        let g = Digraph::new(4, vec![(0, 1), (1, 0), (1, 2), (2, 3), (3, 2)]);
        let (comps, comp_of) = g.sccs();
        assert_eq!(comps.len(), 2);
        assert_eq!(comp_of[0], comp_of[1]);
        assert_eq!(comp_of[2], comp_of[3]);
        // sinks first
        assert_eq!(comps[0], vec![2, 3]);
        let cond = g.condensation(&comp_of, comps.len());
        assert!(cond[comp_of[0]].contains(&comp_of[2]));
    }

    #[test]
    fn complete_graph_circuit_count() {
        // K3 with both directions: 2 triangles + 3 two-cycles.
        let mut edges = Vec::new();
        for u in 0..3 {
            for v in 0..3 {
                if u != v {
                    edges.push((u, v));
                }
            }
        }
        let g = Digraph::new(3, edges);
        assert_eq!(g.elementary_circuits(&[0, 1, 2], 100).unwrap().len(), 5);
    }

    #[test]
    fn parallel_edges_and_loops() {
        // two self-loops on 0, two parallel 0->1 edges, one 1->0.
        let g = Digraph::new(2, vec![(0, 0), (0, 0), (0, 1), (0, 1), (1, 0)]);
        let c = g.elementary_circuits(&[0, 1], 100).unwrap();
        assert_eq!(c.len(), 4);
        assert!(matches!(g.elementary_circuits(&[0, 1], 3), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn acyclic_has_no_circuit() {
        let g = Digraph::new(3, vec![(0, 1), (1, 2), (0, 2)]);
        assert!(g.elementary_circuits(&[0, 1, 2], 10).unwrap().is_empty());
        assert_eq!(g.sccs().0.len(), 3);
    }
}
