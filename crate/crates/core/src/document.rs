//! JSON automaton documents.
//!
//! ```json
//! {
//!   "alphabet": ["a", "b"],
//!   "states": ["p", "q"],
//!   "initial": {"p": "0"},
//!   "final": {"q": "1/2"},
//!   "transitions": [{"from": "p", "label": "a", "weight": "-3", "to": "q"}]
//! }
//! ```
//!
//! Weights are strings (integers, decimals, `p/q`, `-inf`) or JSON integers.
//! A `-inf` initial or final weight is the same as leaving the state out;
//! a `-inf` transition is an error.

use indexmap::IndexMap;
use serde::Serialize;
use serde_json::Value;

use crate::automaton::WeightedAutomaton;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::weight::MaxPlus;
use crate::{Automaton, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitionRecord {
    pub from: String,
    pub label: String,
    pub weight: String,
    pub to: String,
}

/// Canonical serialized form of an automaton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutomatonDocument {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: IndexMap<String, String>,
    #[serde(rename = "final")]
    pub terminal: IndexMap<String, String>,
    pub transitions: Vec<TransitionRecord>,
}

impl AutomatonDocument {
    pub fn from_automaton<S: Scalar>(a: &WeightedAutomaton<S>) -> Self {
        let weights = |w: &dyn Fn(usize) -> MaxPlus<S>| -> IndexMap<String, String> {
            (0..a.num_states())
                .filter_map(|s| w(s).into_value().map(|v| (a.state_name(s).to_string(), v.to_string())))
                .collect()
        };
        AutomatonDocument {
            alphabet: a.alphabet().to_vec(),
            states: a.states().to_vec(),
            initial: weights(&|s| a.initial_weight(s).clone()),
            terminal: weights(&|s| a.final_weight(s).clone()),
            transitions: a
                .transitions()
                .iter()
                .map(|t| TransitionRecord {
                    from: a.state_name(t.from).to_string(),
                    label: a.alphabet()[t.label].clone(),
                    weight: t.weight.to_string(),
                    to: a.state_name(t.to).to_string(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes") + "\n"
    }
}

pub fn to_json<S: Scalar>(a: &WeightedAutomaton<S>) -> String {
    AutomatonDocument::from_automaton(a).to_json()
}

fn err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Document { location: location.into(), message: message.into() }
}

fn string_list(root: &Value, key: &str) -> Result<Vec<String>> {
    let items = root.get(key).ok_or_else(|| err(key, "missing field"))?;
    let items = items.as_array().ok_or_else(|| err(key, "expected an array of strings"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, v)| v.as_str().map(str::to_string).ok_or_else(|| err(format!("{key}[{i}]"), "expected a string")))
        .collect()
}

fn weight_at(v: &Value, location: &str) -> Result<MaxPlus<Rational>> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        Value::Number(_) => {
            return Err(err(location, "non-integer weights must be written as strings, e.g. \"1/2\" or \"0.25\""))
        }
        _ => return Err(err(location, "expected a weight string")),
    };
    text.parse::<MaxPlus<Rational>>().map_err(|e| err(location, e.to_string()))
}

/// Parses a document, reporting syntax errors by line and column and
/// structural errors by field path.
pub fn parse_document(text: &str) -> Result<Automaton> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| err(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
    if !root.is_object() {
        return Err(err("document", "expected a JSON object"));
    }
    let alphabet = string_list(&root, "alphabet")?;
    let mut a = Automaton::new(&alphabet).map_err(|e| err("alphabet", e.to_string()))?;
    for (i, s) in string_list(&root, "states")?.into_iter().enumerate() {
        a.add_state(s).map_err(|e| err(format!("states[{i}]"), e.to_string()))?;
    }

    for key in ["initial", "final"] {
        let Some(map) = root.get(key) else { continue };
        let map = map.as_object().ok_or_else(|| err(key, "expected an object mapping states to weights"))?;
        for (name, w) in map {
            let location = format!("{key}.{name}");
            let s = a.state_id(name).ok_or_else(|| err(&location, format!("unknown state `{name}`")))?;
            let w = weight_at(w, &location)?;
            if key == "initial" {
                a.set_initial(s, w);
            } else {
                a.set_final(s, w);
            }
        }
    }

    let Some(transitions) = root.get("transitions") else { return Ok(a) };
    let transitions = transitions.as_array().ok_or_else(|| err("transitions", "expected an array"))?;
    for (i, t) in transitions.iter().enumerate() {
        let at = |field: &str| format!("transitions[{i}].{field}");
        let text = |field: &str| -> Result<&str> {
            t.get(field).and_then(Value::as_str).ok_or_else(|| err(at(field), "missing or not a string"))
        };
        let state = |field: &str| -> Result<usize> {
            let name = text(field)?;
            a.state_id(name).ok_or_else(|| err(at(field), format!("unknown state `{name}`")))
        };
        let (from, to) = (state("from")?, state("to")?);
        let label = text("label")?;
        let l = a.letter(label).ok_or_else(|| err(at("label"), format!("unknown label `{label}`")))?;
        let w = weight_at(t.get("weight").ok_or_else(|| err(at("weight"), "missing field"))?, &at("weight"))?;
        let Some(w) = w.into_value() else {
            let e = Error::BottomTransition {
                from: a.state_name(from).into(),
                label: label.into(),
                to: a.state_name(to).into(),
            };
            return Err(err(at("weight"), e.to_string()));
        };
        a.add_transition(from, l, w, to).map_err(|e| err(format!("transitions[{i}]"), e.to_string()))?;
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trip_is_stable() {
        for (name, a) in fixtures::all() {
            let text = to_json(&a);
            let back = parse_document(&text).unwrap();
            assert_eq!(back, a, "{name}");
            assert_eq!(to_json(&back), text, "{name}");
        }
    }

    #[test]
    fn accepts_all_weight_spellings() {
        let doc = r#"{"alphabet":["a"],"states":["p","q"],
            "initial":{"p":0,"q":"-inf"},"final":{"q":"0.25"},
            "transitions":[{"from":"p","label":"a","weight":"-3/6","to":"q"}]}"#;
        let a = parse_document(doc).unwrap();
        assert_eq!(a.initial_states().count(), 1);
        assert_eq!(a.evaluate_str("a").unwrap().to_string(), "-1/4");
    }

    #[test]
    fn rejects_bottom_transition() {
        let doc = r#"{"alphabet":["a"],"states":["p"],
            "transitions":[{"from":"p","label":"a","weight":"-inf","to":"p"}]}"#;
        match parse_document(doc) {
            Err(Error::Document { location, .. }) => assert_eq!(location, "transitions[0].weight"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_a_line() {
        let doc = "{\n\"alphabet\": [\"a\",\n}";
        match parse_document(doc) {
            Err(Error::Document { location, .. }) => assert!(location.starts_with("line 3"), "{location}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicate_transition_is_located() {
        let doc = r#"{"alphabet":["a"],"states":["p"],
            "transitions":[{"from":"p","label":"a","weight":"1","to":"p"},
                           {"from":"p","label":"a","weight":"2","to":"p"}]}"#;
        match parse_document(doc) {
            Err(Error::Document { location, .. }) => assert_eq!(location, "transitions[1]"),
            other => panic!("{other:?}"),
        }
    }
}
