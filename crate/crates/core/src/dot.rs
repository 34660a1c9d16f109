//! Graphviz output.

use std::fmt::Write;

use crate::automaton::WeightedAutomaton;
use crate::dominance::{coord_list, ProductAutomaton, SccReport};
use crate::scalar::Scalar;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per state, edges labelled `a|w`; initial and final weights
/// hang off invisible anchor nodes.
pub fn export_dot<S: Scalar>(a: &WeightedAutomaton<S>) -> String {
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
    for s in 0..a.num_states() {
        writeln!(out, "  s{s} [label={}];", quote(a.state_name(s))).unwrap();
    }
    for s in 0..a.num_states() {
        if let Some(w) = a.initial_weight(s).value() {
            writeln!(out, "  in{s} [shape=point, style=invis];").unwrap();
            writeln!(out, "  in{s} -> s{s} [label={}];", quote(&w.to_string())).unwrap();
        }
        if let Some(w) = a.final_weight(s).value() {
            writeln!(out, "  out{s} [shape=point, style=invis];").unwrap();
            writeln!(out, "  s{s} -> out{s} [label={}];", quote(&w.to_string())).unwrap();
        }
    }
    for t in a.transitions() {
        let label = format!("{}|{}", a.alphabet()[t.label], t.weight);
        writeln!(out, "  s{} -> s{} [label={}];", t.from, t.to, quote(&label)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// The condensation of a product automaton, one node per component
/// labelled with its states and victorious coordinates.
pub fn condensation_dot<S: Scalar>(p: &ProductAutomaton<S>, report: &SccReport<S>) -> String {
    let mut out = String::from("digraph condensation {\n  rankdir=LR;\n  node [shape=box];\n");
    for (c, scc) in report.sccs.iter().enumerate() {
        let states: Vec<&str> = scc.states.iter().map(|&s| p.state_name(s)).collect();
        let v: Vec<String> = coord_list(scc.victorious).iter().map(usize::to_string).collect();
        let label = format!("{}\\nV={{{}}}", states.join(" "), v.join(","));
        writeln!(out, "  c{c} [label=\"{}\"];", label.replace('"', "\\\"")).unwrap();
    }
    for (c, succ) in report.dag.iter().enumerate() {
        for d in succ {
            writeln!(out, "  c{c} -> c{d};").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fig2_counts() {
        let dot = export_dot(&fixtures::fig2_parity::<i64>());
        assert_eq!(dot.lines().filter(|l| l.contains("shape=point")).count(), 4);
        assert_eq!(dot.lines().filter(|l| l.contains("|")).count(), 4);
        assert_eq!(dot.lines().filter(|l| l.trim_start().starts_with("in") && l.contains("->")).count(), 2);
        assert_eq!(dot, export_dot(&fixtures::fig2_parity::<i64>()));
    }
}
