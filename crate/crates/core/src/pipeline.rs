//! The whole decision chain: finite ambiguity, decomposition, dominance,
//! unambiguous construction, twin property and determinization.

use serde::Serialize;

use crate::ambiguity::{equivalent_up_to, is_infinitely_ambiguous, AmbiguityWitness};
use crate::automaton::{format_word, WeightedAutomaton};
use crate::covering::decompose_unambiguous;
use crate::dominance::{analyze_sccs, product, satisfies_dominance, DominanceWitness};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sequentiality::{
    determinize_weighted, twin_property, verify_sequential, TwinSummary, DEFAULT_DETERMINIZATION_CAP,
};
use crate::unambiguizer::{build_unambiguous, ConstructionLog};

pub const UNDECIDED: &str = "undecided — automaton infinitely ambiguous";

/// Verdicts of [`decide`]. `None` marks a question left open.
#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport<S> {
    pub states: usize,
    pub trimmed_states: usize,
    pub finitely_ambiguous: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ambiguity_witness: Option<AmbiguityWitness>,
    pub leaves: usize,
    pub dominance: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dominance_witness: Option<DominanceWitness>,
    pub unambiguous: Option<bool>,
    pub twins: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twin_witness: Option<TwinSummary>,
    pub sequential: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionLog>,
    pub verified_up_to: usize,
    pub status: String,
    #[serde(skip)]
    pub artifacts: Artifacts<S>,
}

#[derive(Clone, Debug, Default)]
pub struct Artifacts<S> {
    pub leaves: Vec<WeightedAutomaton<S>>,
    pub unambiguous: Option<WeightedAutomaton<S>>,
    pub sequential: Option<WeightedAutomaton<S>>,
}

impl<S> PipelineReport<S> {
    /// Seq ⊆ NAmb ⊆ FAmb, with open questions allowed.
    pub fn is_consistent(&self) -> bool {
        let seq_implies_unamb = self.sequential != Some(true) || self.unambiguous == Some(true);
        let unamb_implies_famb = self.unambiguous != Some(true) || self.finitely_ambiguous;
        seq_implies_unamb && unamb_implies_famb
    }
}

/// Classifies the series of `a`, cross-checking every constructed automaton
/// against `a` on all words of length at most `bound`.
pub fn decide<S: Scalar>(a: &WeightedAutomaton<S>, bound: usize) -> Result<PipelineReport<S>> {
    let trimmed = a.trim();
    let mut report = PipelineReport {
        states: a.num_states(),
        trimmed_states: trimmed.num_states(),
        finitely_ambiguous: true,
        ambiguity_witness: None,
        leaves: 0,
        dominance: None,
        dominance_witness: None,
        unambiguous: None,
        twins: None,
        twin_witness: None,
        sequential: None,
        construction: None,
        verified_up_to: bound,
        status: String::new(),
        artifacts: Artifacts { leaves: Vec::new(), unambiguous: None, sequential: None },
    };

    if let Some(w) = is_infinitely_ambiguous(&trimmed) {
        report.finitely_ambiguous = false;
        report.ambiguity_witness = Some(w);
        report.status = UNDECIDED.to_string();
        return Ok(report);
    }

    if trimmed.num_states() == 0 {
        report.leaves = 1;
        report.dominance = Some(true);
        report.unambiguous = Some(true);
        report.twins = Some(true);
        report.sequential = Some(true);
        report.status = "empty series, sequential".into();
        report.artifacts.sequential = Some(trimmed.clone());
        report.artifacts.unambiguous = Some(trimmed.clone());
        report.artifacts.leaves = vec![trimmed];
        return Ok(report);
    }

    let leaves = decompose_unambiguous(&trimmed)?.leaves;
    verify_union(&trimmed, &leaves, bound)?;
    report.leaves = leaves.len();

    let p = product(&leaves)?;
    let sccs = analyze_sccs(&p)?;
    let dominance = satisfies_dominance(&p, &sccs);
    report.dominance = Some(dominance.holds);
    if !dominance.holds {
        report.dominance_witness = dominance.witness;
        report.unambiguous = Some(false);
        report.sequential = Some(false);
        report.status = "finitely ambiguous; series not unambiguous, hence not sequential".into();
        report.artifacts.leaves = leaves;
        return Ok(report);
    }

    let u = build_unambiguous(&leaves, &p, &sccs)?;
    verify_equal(&trimmed, &u.automaton, bound, "unambiguous automaton")?;
    report.unambiguous = Some(true);
    report.construction = Some(u.log.clone());

    let twins = twin_property(&u.automaton);
    report.twins = Some(twins.twins);
    report.twin_witness = twins.summary();
    if twins.twins {
        let seq = determinize_weighted(&u.automaton, DEFAULT_DETERMINIZATION_CAP)?;
        verify_sequential(&trimmed, &seq, bound)?;
        report.sequential = Some(true);
        report.status = "sequential series".into();
        report.artifacts.sequential = Some(seq);
    } else {
        report.sequential = Some(false);
        report.status = "unambiguous series, not sequential".into();
    }
    report.artifacts.leaves = leaves;
    report.artifacts.unambiguous = Some(u.automaton);
    debug_assert!(report.is_consistent());
    Ok(report)
}

fn verify_equal<S: Scalar>(a: &WeightedAutomaton<S>, b: &WeightedAutomaton<S>, bound: usize, what: &str) -> Result<()> {
    match equivalent_up_to(a, b, bound)?.counterexample {
        Some(w) => Err(Error::Verification(format!("{what} differs on `{}`", format_word(a.alphabet(), &w)))),
        None => Ok(()),
    }
}

fn verify_union<S: Scalar>(a: &WeightedAutomaton<S>, leaves: &[WeightedAutomaton<S>], bound: usize) -> Result<()> {
    let union = WeightedAutomaton::union_all(leaves)?;
    verify_equal(a, &union, bound, "union of the leaves")
}
