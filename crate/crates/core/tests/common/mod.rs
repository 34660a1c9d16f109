//! Brute-force reference semantics, independent of the library's
//! vector-matrix evaluation: every path is enumerated explicitly.

#![allow(dead_code)]

use maxplus::{Letter, MaxPlus, Scalar, WeightedAutomaton, Word};

/// Weights of all successful paths labelled `word`.
pub fn path_weights<S: Scalar>(a: &WeightedAutomaton<S>, word: &[Letter]) -> Vec<S> {
    let mut out = Vec::new();
    for s in 0..a.num_states() {
        if let Some(i) = a.initial_weight(s).value() {
            walk(a, word, s, i.clone(), &mut out);
        }
    }
    out
}

fn walk<S: Scalar>(a: &WeightedAutomaton<S>, rest: &[Letter], at: usize, acc: S, out: &mut Vec<S>) {
    match rest.split_first() {
        None => {
            if let Some(f) = a.final_weight(at).value() {
                out.push(acc + f.clone());
            }
        }
        Some((&l, tail)) => {
            for t in a.transitions() {
                if t.from == at && t.label == l {
                    walk(a, tail, t.to, acc.clone() + t.weight.clone(), out);
                }
            }
        }
    }
}

pub fn eval<S: Scalar>(a: &WeightedAutomaton<S>, word: &[Letter]) -> MaxPlus<S> {
    path_weights(a, word).into_iter().max().map_or(MaxPlus::Bottom, MaxPlus::Finite)
}

pub fn paths<S: Scalar>(a: &WeightedAutomaton<S>, word: &[Letter]) -> usize {
    path_weights(a, word).len()
}

/// Every word over `k` letters of length at most `bound`, shortlex.
pub fn words(k: usize, bound: usize) -> Vec<Word> {
    let mut all = vec![Vec::new()];
    let mut start = 0;
    for _ in 0..bound {
        let end = all.len();
        for i in start..end {
            for l in 0..k {
                let mut w = all[i].clone();
                w.push(l);
                all.push(w);
            }
        }
        start = end;
    }
    all
}

pub fn count(word: &[Letter], letter: Letter) -> i64 {
    word.iter().filter(|&&l| l == letter).count() as i64
}

/// Pointwise max of several series by brute force.
pub fn eval_max<S: Scalar>(family: &[WeightedAutomaton<S>], word: &[Letter]) -> MaxPlus<S> {
    family.iter().map(|a| eval(a, word)).max().unwrap_or(MaxPlus::Bottom)
}
