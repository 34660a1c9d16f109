//! Construction of an unambiguous automaton for ⊕ᵢ S(Aᵢ) when the product
//! of the family satisfies the dominance property.
//!
//! States are configurations (z, q): q a product state and z a normalized
//! residual vector recording how far each member lags behind. Coordinates
//! that fall more than N·M below the victorious leader can never catch up
//! and are dropped to ⊥, which keeps the set of configurations finite.

use std::collections::HashMap;

use serde::Serialize;

use crate::dominance::{satisfies_dominance, ProductAutomaton, SccReport};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::weight::{MaxPlus, MaxPlusTuple};
use crate::WeightedAutomaton;

pub const DEFAULT_CONFIGURATION_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineConstants<S> {
    /// Number of product states.
    pub n: usize,
    /// Spread between the largest and smallest finite transition or final
    /// weight of the family.
    pub m: S,
}

impl<S: Scalar> PipelineConstants<S> {
    pub fn threshold(&self) -> S {
        self.m.clone() * S::from_usize(self.n).expect("state count fits the scalar")
    }
}

pub fn constants_nm<S: Scalar>(
    family: &[WeightedAutomaton<S>],
    p: &ProductAutomaton<S>,
) -> Result<PipelineConstants<S>> {
    let weights = family.iter().flat_map(|a| {
        a.transitions()
            .iter()
            .map(|t| t.weight.clone())
            .chain((0..a.num_states()).filter_map(|s| a.final_weight(s).value().cloned()))
    });
    let (lo, hi) = weights
        .fold(None, |acc: Option<(S, S)>, w| match acc {
            None => Some((w.clone(), w)),
            Some((lo, hi)) => Some((lo.min(w.clone()), hi.max(w))),
        })
        .ok_or(Error::NoFiniteWeight)?;
    Ok(PipelineConstants { n: p.num_states().max(1), m: hi - lo })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration<S> {
    pub z: MaxPlusTuple<S>,
    pub q: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionLog {
    pub configurations: usize,
    pub transitions: usize,
    /// Largest finite residual coordinate over all configurations.
    pub max_spread: String,
    pub n: usize,
    pub m: String,
}

#[derive(Clone, Debug)]
pub struct Unambiguized<S> {
    pub automaton: WeightedAutomaton<S>,
    pub configurations: Vec<Configuration<S>>,
    pub constants: PipelineConstants<S>,
    pub log: ConstructionLog,
}

pub fn build_unambiguous<S: Scalar>(
    family: &[WeightedAutomaton<S>],
    p: &ProductAutomaton<S>,
    report: &SccReport<S>,
) -> Result<Unambiguized<S>> {
    build_unambiguous_with_cap(family, p, report, DEFAULT_CONFIGURATION_CAP)
}

pub fn build_unambiguous_with_cap<S: Scalar>(
    family: &[WeightedAutomaton<S>],
    p: &ProductAutomaton<S>,
    report: &SccReport<S>,
    cap: usize,
) -> Result<Unambiguized<S>> {
    let dominance = satisfies_dominance(p, report);
    if !dominance.holds {
        let word = match dominance.witness.map(|w| w.word) {
            Some(w) if !w.is_empty() => w,
            _ => "ε".to_string(),
        };
        return Err(Error::DominanceViolated { word });
    }
    let constants = constants_nm(family, p)?;
    let cut = constants.threshold();

    let alphabet = p.alphabet().to_vec();
    let mut out = WeightedAutomaton::new(&alphabet)?;
    let mut configs: Vec<Configuration<S>> = Vec::new();
    let mut index: HashMap<Configuration<S>, usize> = HashMap::new();
    let mut intern =
        |c: Configuration<S>, out: &mut WeightedAutomaton<S>, configs: &mut Vec<Configuration<S>>| -> Result<usize> {
            if let Some(&i) = index.get(&c) {
                return Ok(i);
            }
            if configs.len() >= cap {
                return Err(Error::CapExceeded { what: "configuration count".into(), cap });
            }
            let i = out.add_state(format!("{}:{}", p.state_name(c.q), c.z))?;
            if let Some(beta) = p.final_weight(c.q) {
                let w =
                    c.z.coords().iter().zip(beta.coords()).fold(MaxPlus::Bottom, |acc, (z, b)| acc.plus(&z.times(b)));
                out.set_final(i, w);
            }
            index.insert(c.clone(), i);
            configs.push(c);
            Ok(i)
        };

    for q in p.initial_states() {
        let alpha = p.initial_weight(q).expect("initial state");
        let c = Configuration { z: alpha.vnorm()?, q };
        let i = intern(c, &mut out, &mut configs)?;
        out.set_initial(i, MaxPlus::Finite(alpha.vmin()?));
    }
    // Configurations are numbered in discovery order, so scanning them is a BFS.
    let mut s = 0;
    while s < configs.len() {
        let Configuration { z, q } = configs[s].clone();
        for l in 0..alphabet.len() {
            for &t in p.outgoing(q) {
                let tr = &p.transitions()[t];
                if tr.label != l {
                    continue;
                }
                let sum = z.times(&tr.weight)?;
                let v = report.victorious_of_state(tr.to);
                let leader = (0..sum.len())
                    .filter(|&i| v >> i & 1 == 1)
                    .filter_map(|i| sum.get(i).value().map(|x| (x.clone(), i)))
                    .min()
                    .map(|(x, _)| x)
                    .ok_or_else(|| Error::NoVictoriousCoordinate { state: p.state_name(tr.to).to_string() })?;
                let floor = leader - cut.clone();
                let y = MaxPlusTuple::new(
                    sum.coords()
                        .iter()
                        .map(|c| match c {
                            MaxPlus::Finite(x) if *x < floor => MaxPlus::Bottom,
                            other => other.clone(),
                        })
                        .collect(),
                );
                let weight = y.vmin()?;
                let d = intern(Configuration { z: y.vnorm()?, q: tr.to }, &mut out, &mut configs)?;
                out.add_transition(s, l, weight, d)?;
            }
        }
        s += 1;
    }

    let max_spread = configs
        .iter()
        .flat_map(|c| c.z.coords().iter().filter_map(MaxPlus::value))
        .max()
        .cloned()
        .unwrap_or_else(S::zero);
    let log = ConstructionLog {
        configurations: configs.len(),
        transitions: out.transitions().len(),
        max_spread: max_spread.to_string(),
        n: constants.n,
        m: constants.m.to_string(),
    };
    Ok(Unambiguized { automaton: out, configurations: configs, constants, log })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::words_up_to;
    use crate::dominance::{analyze_sccs, product};
    use crate::fixtures;

    fn run(family: &[WeightedAutomaton<i64>]) -> Result<Unambiguized<i64>> {
        let p = product(family)?;
        let r = analyze_sccs(&p)?;
        build_unambiguous(family, &p, &r)
    }

    #[test]
    fn constants_for_split_fig3() {
        let family = [fixtures::count_a::<i64>(), fixtures::count_b()];
        let p = product(&family).unwrap();
        assert_eq!(constants_nm(&family, &p).unwrap(), PipelineConstants { n: 1, m: 1 });
    }

    #[test]
    fn max_of_ones_and_count_a_is_length() {
        let u = run(&[fixtures::all_ones(), fixtures::count_a()]).unwrap();
        assert!(u.configurations.len() <= 10);
        for w in words_up_to(2, 6) {
            assert_eq!(u.automaton.evaluate(&w).unwrap(), MaxPlus::int(w.len() as i64));
            assert!(u.automaton.count_successful_paths(&w).unwrap() <= 1);
        }
    }

    #[test]
    fn max_of_zero_and_count_a() {
        let u = run(&[fixtures::constant_zero(), fixtures::count_a()]).unwrap();
        for w in words_up_to(2, 6) {
            let a = w.iter().filter(|&&l| l == 0).count() as i64;
            assert_eq!(u.automaton.evaluate(&w).unwrap(), MaxPlus::int(a));
        }
    }

    #[test]
    fn single_member_is_copied() {
        let a = fixtures::fig5_evenblocks::<i64>();
        let u = run(std::slice::from_ref(&a)).unwrap();
        for w in words_up_to(2, 6) {
            assert_eq!(u.automaton.evaluate(&w).unwrap(), a.evaluate(&w).unwrap());
        }
    }

    #[test]
    fn refuses_without_dominance() {
        let r = run(&[fixtures::count_a(), fixtures::count_b()]);
        assert!(matches!(r, Err(Error::DominanceViolated { .. })));
    }

    #[test]
    fn configurations_are_normalized() {
        let u = run(&[fixtures::all_ones(), fixtures::count_a()]).unwrap();
        for c in &u.configurations {
            assert_eq!(c.z.vmin().unwrap(), 0);
        }
    }
}
