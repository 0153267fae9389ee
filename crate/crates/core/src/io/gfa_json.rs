use serde::{Deserialize, Serialize};

use super::IoError;
use crate::automata::{validate_gfa, Gfa, Label, RawGfa, StateId, Symbol, Transition};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SerializedGfa {
    states: Vec<StateId>,
    #[serde(rename = "final")]
    final_state: Option<StateId>,
    initial: StateId,
    alphabet: Vec<String>,
    transitions: Vec<(StateId, String, StateId)>,
}

/// Reads and validates a `.gfa` record. `states` lists the non-final states.
pub fn read_gfa(text: &str) -> Result<Gfa, IoError> {
    let s: SerializedGfa = serde_json::from_str(text)?;
    let raw = RawGfa {
        states: s.states,
        final_state: s.final_state,
        alphabet: s.alphabet.iter().map(|a| Symbol::new(a)).collect(),
        transitions: s.transitions.into_iter().map(|(p, l, q)| Transition::new(p, Label::parse(&l), q)).collect(),
        initial: s.initial,
    };
    Ok(validate_gfa(raw)?)
}

fn json<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

/// Canonical form: every list sorted, so equal automata give equal text.
/// One transition per line.
pub fn write_gfa(g: &Gfa) -> String {
    let states: Vec<&StateId> = g.states().iter().collect();
    let alphabet: Vec<String> = g.alphabet().iter().map(|a| a.to_string()).collect();
    let ts: Vec<String> = g
        .transitions()
        .iter()
        .map(|t| format!("    {}", json(&(&t.source, t.label.to_string(), &t.target))))
        .collect();
    let transitions = if ts.is_empty() { "[]".to_string() } else { format!("[\n{}\n  ]", ts.join(",\n")) };
    format!(
        "{{\n  \"states\": {},\n  \"final\": {},\n  \"initial\": {},\n  \"alphabet\": {},\n  \"transitions\": {}\n}}\n",
        json(&states),
        json(&g.final_state()),
        json(g.initial().as_str()),
        json(&alphabet),
        transitions
    )
}
