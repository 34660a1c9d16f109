//! Max-plus automata: the triple (α, µ, β) over named states and labels.
//!
//! States and letters are dense indices internally; names are kept for
//! output. Transition weights are always finite, absence encodes ⊥.

use std::collections::{HashMap, VecDeque};

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::matrix::MaxPlusMatrix;
use crate::scalar::Scalar;
use crate::weight::MaxPlus;

pub type Letter = usize;
pub type Word = Vec<Letter>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition<S> {
    pub from: usize,
    pub label: Letter,
    pub weight: S,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedAutomaton<S> {
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: Vec<MaxPlus<S>>,
    terminal: Vec<MaxPlus<S>>,
    transitions: Vec<Transition<S>>,
    out: Vec<Vec<usize>>,
    arcs: HashMap<(usize, Letter, usize), usize>,
    state_index: HashMap<String, usize>,
}

impl<S: Scalar> WeightedAutomaton<S> {
    pub fn new<T: AsRef<str>>(alphabet: &[T]) -> Result<Self> {
        let mut labels: Vec<String> = Vec::with_capacity(alphabet.len());
        for l in alphabet {
            let l = l.as_ref();
            if labels.iter().any(|x| x == l) {
                return Err(Error::DuplicateLabel(l.to_string()));
            }
            labels.push(l.to_string());
        }
        Ok(WeightedAutomaton {
            alphabet: labels,
            states: Vec::new(),
            initial: Vec::new(),
            terminal: Vec::new(),
            transitions: Vec::new(),
            out: Vec::new(),
            arcs: HashMap::new(),
            state_index: HashMap::new(),
        })
    }

    /// An automaton with no state over the same alphabet.
    pub fn empty_like(&self) -> Self {
        Self::new(&self.alphabet).expect("alphabet already validated")
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> Result<usize> {
        let name = name.into();
        if self.state_index.contains_key(&name) {
            return Err(Error::DuplicateState(name));
        }
        let id = self.states.len();
        self.state_index.insert(name.clone(), id);
        self.states.push(name);
        self.initial.push(MaxPlus::Bottom);
        self.terminal.push(MaxPlus::Bottom);
        self.out.push(Vec::new());
        Ok(id)
    }

    pub fn set_initial(&mut self, state: usize, w: MaxPlus<S>) {
        self.initial[state] = w;
    }

    pub fn set_final(&mut self, state: usize, w: MaxPlus<S>) {
        self.terminal[state] = w;
    }

    pub fn add_transition(&mut self, from: usize, label: Letter, weight: S, to: usize) -> Result<usize> {
        if label >= self.alphabet.len() {
            return Err(Error::UnknownLabel(label.to_string()));
        }
        if from >= self.states.len() {
            return Err(Error::UnknownState(from.to_string()));
        }
        if to >= self.states.len() {
            return Err(Error::UnknownState(to.to_string()));
        }
        if self.arcs.contains_key(&(from, label, to)) {
            return Err(Error::DuplicateTransition {
                from: self.states[from].clone(),
                label: self.alphabet[label].clone(),
                to: self.states[to].clone(),
            });
        }
        let id = self.transitions.len();
        self.arcs.insert((from, label, to), id);
        self.transitions.push(Transition { from, label, weight, to });
        self.out[from].push(id);
        Ok(id)
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.states[s]
    }

    pub fn state_id(&self, name: &str) -> Option<usize> {
        self.state_index.get(name).copied()
    }

    pub fn letter(&self, label: &str) -> Option<Letter> {
        self.alphabet.iter().position(|l| l == label)
    }

    pub fn initial_weight(&self, s: usize) -> &MaxPlus<S> {
        &self.initial[s]
    }

    pub fn final_weight(&self, s: usize) -> &MaxPlus<S> {
        &self.terminal[s]
    }

    pub fn initial_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states()).filter(|&s| self.initial[s].is_finite())
    }

    pub fn final_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states()).filter(|&s| self.terminal[s].is_finite())
    }

    pub fn transitions(&self) -> &[Transition<S>] {
        &self.transitions
    }

    pub fn transition(&self, id: usize) -> &Transition<S> {
        &self.transitions[id]
    }

    /// Transition ids leaving `state`, in insertion order.
    pub fn outgoing(&self, state: usize) -> &[usize] {
        &self.out[state]
    }

    pub fn find_transition(&self, from: usize, label: Letter, to: usize) -> Option<usize> {
        self.arcs.get(&(from, label, to)).copied()
    }

    /// Splits `text` into letters: whitespace or comma separated labels, or
    /// one character per letter when every label is a single character.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Vec::new());
        }
        let lookup = |tok: &str| self.letter(tok).ok_or_else(|| Error::UnknownLabel(tok.to_string()));
        if text.contains(|c: char| c.is_whitespace() || c == ',') {
            return text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).map(lookup).collect();
        }
        if self.alphabet.iter().all(|l| l.chars().count() == 1) {
            let mut buf = [0u8; 4];
            return text.chars().map(|c| lookup(c.encode_utf8(&mut buf))).collect();
        }
        lookup(text).map(|l| vec![l])
    }

    pub fn format_word(&self, word: &[Letter]) -> String {
        format_word(&self.alphabet, word)
    }

    fn check_word(&self, word: &[Letter]) -> Result<()> {
        match word.iter().find(|&&l| l >= self.alphabet.len()) {
            Some(l) => Err(Error::UnknownLabel(l.to_string())),
            None => Ok(()),
        }
    }

    /// Row vector after reading one more letter: v' = v ⊗ µ(a).
    pub fn step(&self, v: &[MaxPlus<S>], letter: Letter) -> Vec<MaxPlus<S>> {
        let mut next = vec![MaxPlus::Bottom; self.num_states()];
        for (s, w) in v.iter().enumerate() {
            let Some(w) = w.value() else { continue };
            for &t in &self.out[s] {
                let tr = &self.transitions[t];
                if tr.label == letter {
                    next[tr.to].plus_assign(MaxPlus::Finite(w.clone() + tr.weight.clone()));
                }
            }
        }
        next
    }

    fn close(&self, v: &[MaxPlus<S>]) -> MaxPlus<S> {
        v.iter().zip(&self.terminal).fold(MaxPlus::Bottom, |acc, (x, b)| acc.plus(&x.times(b)))
    }

    /// α µ(w) β
    pub fn evaluate(&self, word: &[Letter]) -> Result<MaxPlus<S>> {
        self.check_word(word)?;
        let mut v = self.initial.clone();
        for &l in word {
            v = self.step(&v, l);
        }
        Ok(self.close(&v))
    }

    pub fn evaluate_str(&self, word: &str) -> Result<MaxPlus<S>> {
        self.evaluate(&self.parse_word(word)?)
    }

    /// Number of successful paths labelled `word`, counted by the same
    /// vector-matrix scheme over (N, +, ×).
    pub fn count_successful_paths(&self, word: &[Letter]) -> Result<u128> {
        self.check_word(word)?;
        let mut v: Vec<u128> = self.initial.iter().map(|w| u128::from(w.is_finite())).collect();
        for &l in word {
            v = self.count_step(&v, l);
        }
        Ok(v.iter()
            .zip(&self.terminal)
            .filter(|(_, b)| b.is_finite())
            .fold(0u128, |acc, (c, _)| acc.saturating_add(*c)))
    }

    fn count_step(&self, v: &[u128], letter: Letter) -> Vec<u128> {
        let mut next = vec![0u128; self.num_states()];
        for (s, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &t in &self.out[s] {
                let tr = &self.transitions[t];
                if tr.label == letter {
                    next[tr.to] = next[tr.to].saturating_add(c);
                }
            }
        }
        next
    }

    /// Maximum of [`count_successful_paths`](Self::count_successful_paths)
    /// over all words of length at most `bound`, with a word attaining it.
    pub fn max_paths_up_to(&self, bound: usize) -> (u128, Word) {
        let init: Vec<u128> = self.initial.iter().map(|w| u128::from(w.is_finite())).collect();
        let count = |v: &[u128]| {
            v.iter()
                .zip(&self.terminal)
                .filter(|(_, b)| b.is_finite())
                .fold(0u128, |acc, (c, _)| acc.saturating_add(*c))
        };
        let mut best = (count(&init), Vec::new());
        let mut level = vec![(Vec::new(), init)];
        for _ in 0..bound {
            let mut next = Vec::new();
            for (word, v) in &level {
                for l in 0..self.alphabet.len() {
                    let nv = self.count_step(v, l);
                    if nv.iter().all(|&c| c == 0) {
                        continue;
                    }
                    let mut w = word.clone();
                    w.push(l);
                    let c = count(&nv);
                    if c > best.0 {
                        best = (c, w.clone());
                    }
                    next.push((w, nv));
                }
            }
            level = next;
        }
        best
    }

    /// Coefficients of every word of length at most `bound`, in shortlex order.
    pub fn sample_series(&self, bound: usize) -> SeriesSample<S> {
        let mut entries = IndexMap::new();
        let mut level = vec![(Vec::new(), self.initial.clone())];
        entries.insert(Vec::new(), self.close(&self.initial));
        for _ in 0..bound {
            let mut next = Vec::with_capacity(level.len() * self.alphabet.len());
            for (word, v) in &level {
                for l in 0..self.alphabet.len() {
                    let nv = self.step(v, l);
                    let mut w = word.clone();
                    w.push(l);
                    entries.insert(w.clone(), self.close(&nv));
                    next.push((w, nv));
                }
            }
            level = next;
        }
        SeriesSample { alphabet: self.alphabet.clone(), bound, entries }
    }

    /// µ(a) as a dense matrix.
    pub fn matrix(&self, letter: Letter) -> MaxPlusMatrix<S> {
        let n = self.num_states();
        let mut m = MaxPlusMatrix::zeros(n, n);
        for tr in self.transitions.iter().filter(|t| t.label == letter) {
            m.set(tr.from, tr.to, MaxPlus::Finite(tr.weight.clone()));
        }
        m
    }

    pub fn accessible(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut queue: VecDeque<usize> = self.initial_states().collect();
        for &s in &queue {
            seen[s] = true;
        }
        while let Some(s) = queue.pop_front() {
            for &t in &self.out[s] {
                let to = self.transitions[t].to;
                if !seen[to] {
                    seen[to] = true;
                    queue.push_back(to);
                }
            }
        }
        seen
    }

    pub fn coaccessible(&self) -> Vec<bool> {
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); self.num_states()];
        for tr in &self.transitions {
            rev[tr.to].push(tr.from);
        }
        let mut seen = vec![false; self.num_states()];
        let mut queue: VecDeque<usize> = self.final_states().collect();
        for &s in &queue {
            seen[s] = true;
        }
        while let Some(s) = queue.pop_front() {
            for &p in &rev[s] {
                if !seen[p] {
                    seen[p] = true;
                    queue.push_back(p);
                }
            }
        }
        seen
    }

    pub fn is_trim(&self) -> bool {
        let acc = self.accessible();
        let co = self.coaccessible();
        acc.iter().zip(&co).all(|(a, c)| *a && *c)
    }

    /// Keeps only states that lie on some successful path.
    pub fn trim(&self) -> Self {
        let acc = self.accessible();
        let co = self.coaccessible();
        let keep: Vec<bool> = acc.iter().zip(&co).map(|(a, c)| *a && *c).collect();
        self.restrict(&keep).0
    }

    /// Sub-automaton induced by the states flagged in `keep`, together with
    /// the map from new state ids to old ones.
    pub fn restrict(&self, keep: &[bool]) -> (Self, Vec<usize>) {
        let mut out = self.empty_like();
        let mut map = vec![usize::MAX; self.num_states()];
        let mut back = Vec::new();
        for s in (0..self.num_states()).filter(|&s| keep[s]) {
            map[s] = out.add_state(self.states[s].clone()).expect("names are unique");
            out.initial[map[s]] = self.initial[s].clone();
            out.terminal[map[s]] = self.terminal[s].clone();
            back.push(s);
        }
        for tr in &self.transitions {
            if keep[tr.from] && keep[tr.to] {
                out.add_transition(map[tr.from], tr.label, tr.weight.clone(), map[tr.to])
                    .expect("no duplicates in source");
            }
        }
        (out, back)
    }

    /// Same structure with every transition weight shifted by `c`.
    pub fn shift_transitions(&self, c: &S) -> Self {
        let mut out = self.clone();
        for tr in &mut out.transitions {
            tr.weight = tr.weight.clone() + c.clone();
        }
        out
    }

    /// Sequential: at most one initial state and, per state and letter, at
    /// most one outgoing transition. An automaton with no initial state
    /// recognizes the zero series and is accepted as sequential.
    pub fn is_sequential(&self) -> bool {
        if self.initial_states().count() > 1 {
            return false;
        }
        (0..self.num_states()).all(|s| {
            let mut seen = vec![false; self.alphabet.len()];
            self.out[s].iter().all(|&t| !std::mem::replace(&mut seen[self.transitions[t].label], true))
        })
    }

    fn check_same_alphabet(&self, other: &Self) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch { left: self.alphabet.clone(), right: other.alphabet.clone() });
        }
        Ok(())
    }

    /// Disjoint union; realizes S(self) ⊕ S(other).
    pub fn union(&self, other: &Self) -> Result<Self> {
        Self::union_all(&[self.clone(), other.clone()])
    }

    /// Disjoint union of a family. State names are kept when they do not
    /// clash; otherwise every state is prefixed with `<member index>.`.
    pub fn union_all(family: &[Self]) -> Result<Self> {
        let first = family.first().ok_or(Error::EmptyFamily)?;
        for a in &family[1..] {
            first.check_same_alphabet(a)?;
        }
        let total: usize = family.iter().map(Self::num_states).sum();
        let mut names: Vec<&String> = family.iter().flat_map(|a| a.states.iter()).collect();
        names.sort();
        names.dedup();
        let clash = names.len() != total;
        let mut out = first.empty_like();
        for (k, a) in family.iter().enumerate() {
            let base = out.num_states();
            for (s, name) in a.states.iter().enumerate() {
                let name = if clash { format!("{k}.{name}") } else { name.clone() };
                let id = out.add_state(name)?;
                out.initial[id] = a.initial[s].clone();
                out.terminal[id] = a.terminal[s].clone();
            }
            for tr in &a.transitions {
                out.add_transition(base + tr.from, tr.label, tr.weight.clone(), base + tr.to)?;
            }
        }
        Ok(out)
    }

    /// Tensor product: dimension ∏ Qᵢ with every entry the ⊗ of the
    /// members' entries.
    pub fn tensor(family: &[Self]) -> Result<Self> {
        let first = family.first().ok_or(Error::EmptyFamily)?;
        for a in &family[1..] {
            first.check_same_alphabet(a)?;
        }
        let dims: Vec<usize> = family.iter().map(Self::num_states).collect();
        let total: usize = dims.iter().product();
        let mut out = first.empty_like();
        let mut tuples = Vec::with_capacity(total);
        for idx in 0..total {
            let tuple = unrank(idx, &dims);
            let name = if family.len() == 1 {
                family[0].states[tuple[0]].clone()
            } else {
                tuple_name(tuple.iter().enumerate().map(|(i, &s)| family[i].states[s].as_str()))
            };
            let id = out.add_state(name)?;
            out.initial[id] =
                tuple.iter().enumerate().fold(MaxPlus::one(), |acc, (i, &s)| acc.times(&family[i].initial[s]));
            out.terminal[id] =
                tuple.iter().enumerate().fold(MaxPlus::one(), |acc, (i, &s)| acc.times(&family[i].terminal[s]));
            tuples.push(tuple);
        }
        for (id, tuple) in tuples.iter().enumerate() {
            for letter in 0..first.alphabet.len() {
                // Every combination of one letter-transition per member.
                let choices: Vec<Vec<&Transition<S>>> = tuple
                    .iter()
                    .enumerate()
                    .map(|(i, &s)| {
                        family[i].out[s]
                            .iter()
                            .map(|&t| &family[i].transitions[t])
                            .filter(|t| t.label == letter)
                            .collect()
                    })
                    .collect();
                if choices.iter().any(Vec::is_empty) {
                    continue;
                }
                for combo in cartesian(&choices) {
                    let to: Vec<usize> = combo.iter().map(|t| t.to).collect();
                    let weight = combo.iter().fold(S::zero(), |acc, t| acc + t.weight.clone());
                    out.add_transition(id, letter, weight, rank(&to, &dims))?;
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn tuple_name<'a>(parts: impl Iterator<Item = &'a str>) -> String {
    format!("({})", parts.collect::<Vec<_>>().join(","))
}

fn unrank(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for i in (0..dims.len()).rev() {
        out[i] = idx % dims[i];
        idx /= dims[i];
    }
    out
}

fn rank(tuple: &[usize], dims: &[usize]) -> usize {
    tuple.iter().zip(dims).fold(0, |acc, (&t, &d)| acc * d + t)
}

pub(crate) fn cartesian<T: Copy>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut acc: Vec<Vec<T>> = vec![Vec::new()];
    for options in choices {
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |&o| {
                    let mut p = prefix.clone();
                    p.push(o);
                    p
                })
            })
            .collect();
    }
    acc
}

pub fn format_word(alphabet: &[String], word: &[Letter]) -> String {
    if alphabet.iter().all(|l| l.chars().count() == 1) {
        word.iter().map(|&l| alphabet[l].as_str()).collect()
    } else {
        word.iter().map(|&l| alphabet[l].as_str()).collect::<Vec<_>>().join(" ")
    }
}

/// All words over `k` letters of length at most `bound`, shortlex order.
pub fn words_up_to(k: usize, bound: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut level = vec![Vec::new()];
    for _ in 0..bound {
        let mut next = Vec::with_capacity(level.len() * k);
        for w in &level {
            for l in 0..k {
                let mut x: Word = w.clone();
                x.push(l);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// Coefficients of a series on every word up to a length bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesSample<S> {
    pub alphabet: Vec<String>,
    pub bound: usize,
    pub entries: IndexMap<Word, MaxPlus<S>>,
}

impl<S: Scalar> SeriesSample<S> {
    pub fn get(&self, word: &[Letter]) -> Option<&MaxPlus<S>> {
        self.entries.get(word)
    }

    /// Words with a finite coefficient.
    pub fn support(&self) -> impl Iterator<Item = &Word> + '_ {
        self.entries.iter().filter(|(_, w)| w.is_finite()).map(|(k, _)| k)
    }
}

/// Name-based construction, mostly for fixtures and tests. States are
/// created in order of first mention.
pub struct AutomatonBuilder<S> {
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: Vec<(String, MaxPlus<S>)>,
    terminal: Vec<(String, MaxPlus<S>)>,
    arcs: Vec<(String, String, S, String)>,
}

impl<S: Scalar> AutomatonBuilder<S> {
    pub fn new<T: AsRef<str>>(alphabet: &[T]) -> Self {
        AutomatonBuilder {
            alphabet: alphabet.iter().map(|l| l.as_ref().to_string()).collect(),
            states: Vec::new(),
            initial: Vec::new(),
            terminal: Vec::new(),
            arcs: Vec::new(),
        }
    }

    fn mention(&mut self, s: &str) {
        if !self.states.iter().any(|x| x == s) {
            self.states.push(s.to_string());
        }
    }

    pub fn state(mut self, s: &str) -> Self {
        self.mention(s);
        self
    }

    pub fn initial(mut self, s: &str, w: i64) -> Self {
        self.mention(s);
        self.initial.push((s.to_string(), MaxPlus::int(w)));
        self
    }

    pub fn final_(mut self, s: &str, w: i64) -> Self {
        self.mention(s);
        self.terminal.push((s.to_string(), MaxPlus::int(w)));
        self
    }

    pub fn arc(mut self, from: &str, label: &str, w: i64, to: &str) -> Self {
        self.mention(from);
        self.mention(to);
        self.arcs.push((from.to_string(), label.to_string(), S::int(w), to.to_string()));
        self
    }

    /// One arc per `(label, weight)` pair.
    pub fn arcs(mut self, from: &str, labels: &[(&str, i64)], to: &str) -> Self {
        for &(l, w) in labels {
            self = self.arc(from, l, w, to);
        }
        self
    }

    pub fn build(self) -> Result<WeightedAutomaton<S>> {
        let mut a = WeightedAutomaton::new(&self.alphabet)?;
        for s in &self.states {
            a.add_state(s.clone())?;
        }
        let id = |a: &WeightedAutomaton<S>, s: &str| a.state_id(s).ok_or_else(|| Error::UnknownState(s.into()));
        for (s, w) in self.initial {
            let i = id(&a, &s)?;
            a.set_initial(i, w);
        }
        for (s, w) in self.terminal {
            let i = id(&a, &s)?;
            a.set_final(i, w);
        }
        for (from, label, w, to) in self.arcs {
            let l = a.letter(&label).ok_or(Error::UnknownLabel(label))?;
            let (f, t) = (id(&a, &from)?, id(&a, &to)?);
            a.add_transition(f, l, w, t)?;
        }
        Ok(a)
    }
}

/// The heap automaton (𝟙, M, δ) of a Tetris model: one state per slot, all
/// initial with weight 0; M(a)_ij = 1 for i, j ∈ R(a), 0 for i = j ∉ R(a),
/// ⊥ otherwise; the slots in `finals` get final weight 0.
pub fn heap_automaton<S: Scalar>(
    slots: &[&str],
    pieces: &[(&str, &[&str])],
    finals: &[&str],
) -> Result<WeightedAutomaton<S>> {
    let labels: Vec<&str> = pieces.iter().map(|(l, _)| *l).collect();
    let mut a = WeightedAutomaton::new(&labels)?;
    for s in slots {
        let id = a.add_state(*s)?;
        a.set_initial(id, MaxPlus::one());
    }
    for f in finals {
        let id = a.state_id(f).ok_or_else(|| Error::UnknownState(f.to_string()))?;
        a.set_final(id, MaxPlus::one());
    }
    for (letter, (label, occupied)) in pieces.iter().enumerate() {
        if occupied.is_empty() {
            return Err(Error::EmptyPiece(label.to_string()));
        }
        let mut inside = vec![false; slots.len()];
        for s in occupied.iter() {
            let id = a.state_id(s).ok_or_else(|| Error::UnknownState(s.to_string()))?;
            inside[id] = true;
        }
        for i in 0..slots.len() {
            for j in 0..slots.len() {
                if inside[i] && inside[j] {
                    a.add_transition(i, letter, S::one(), j)?;
                } else if i == j {
                    a.add_transition(i, letter, S::zero(), j)?;
                }
            }
        }
    }
    Ok(a)
}
