//! GFAs: finite automata with at most one final state, which is a sink, is
//! never initial, and is the only possible target of `eps`-labelled edges.
//!
//! This module holds the data model together with the exact decision
//! procedures (language equivalence, bisimilarity, isomorphism) that the rest
//! of the crate uses as its semantic ground truth.

mod bisim;
mod dfa;
mod iso;
mod ops;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use bisim::bisimilar;
pub use dfa::{determinize, lang_equiv, Dfa, Equivalence, SINK_ID};
pub use iso::isomorphic;
pub use ops::{accepts, language_up_to, reach, reduce, saturate, strip_epsilon};
pub(crate) use ops::{words_reaching, Target};

/// Opaque state identifier. Canonical ordering is lexicographic.
pub type StateId = String;

/// Reserved spelling of the empty-word label in every textual format.
pub const EPS: &str = "eps";

/// An action symbol `a` of the alphabet.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Nonempty identifier starting with a lowercase letter, other than `eps`.
    pub fn is_valid_name(name: &str) -> bool {
        let mut chars = name.chars();
        matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
            && name != EPS
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A transition label: an alphabet symbol or the empty word.
///
/// Symbols sort before `Eps`, which is the order used when printing sums.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Sym(Symbol),
    Eps,
}

impl Label {
    pub fn sym(name: &str) -> Self {
        Label::Sym(Symbol::new(name))
    }

    pub fn parse(text: &str) -> Self {
        if text == EPS {
            Label::Eps
        } else {
            Label::sym(text)
        }
    }

    pub fn symbol(&self) -> Option<&Symbol> {
        match self {
            Label::Sym(s) => Some(s),
            Label::Eps => None,
        }
    }

    pub fn is_eps(&self) -> bool {
        matches!(self, Label::Eps)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Sym(s) => write!(f, "{s}"),
            Label::Eps => f.write_str(EPS),
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite word over the alphabet; the empty vector is ε.
///
/// Words are ordered shortlex (length first, then lexicographically).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Splits `text` into one-character symbols; `""` is the empty word.
    pub fn from_chars(text: &str) -> Self {
        Word(text.chars().map(|c| Symbol::new(&c.to_string())).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }

    pub fn pushed(&self, s: &Symbol) -> Word {
        let mut v = self.0.clone();
        v.push(s.clone());
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("<eps>");
        }
        let sep = if self.0.iter().all(|s| s.as_str().chars().count() == 1) { "" } else { " " };
        let parts: Vec<&str> = self.0.iter().map(Symbol::as_str).collect();
        f.write_str(&parts.join(sep))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub source: StateId,
    pub label: Label,
    pub target: StateId,
}

impl Transition {
    pub fn new(source: impl Into<StateId>, label: Label, target: impl Into<StateId>) -> Self {
        Transition { source: source.into(), label, target: target.into() }
    }
}

/// An unchecked automaton description, as read from a file or built by hand.
#[derive(Clone, Debug, Default)]
pub struct RawGfa {
    pub states: Vec<StateId>,
    pub final_state: Option<StateId>,
    pub alphabet: Vec<Symbol>,
    pub transitions: Vec<Transition>,
    pub initial: StateId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfaError {
    #[error("final state `{0}` cannot be the initial state")]
    FinalIsInitial(StateId),
    #[error("final state `{0}` must not be listed among the non-final states")]
    FinalAmongStates(StateId),
    #[error("eps transition {from} -> {to} does not target the final state")]
    EpsilonToNonFinal { from: StateId, to: StateId },
    #[error("transition {label} -> {target} leaves the final state")]
    OutgoingFromFinal { label: Label, target: StateId },
    #[error("label `{label}` of transition {from} -> {to} is not in the alphabet")]
    UnknownLabel { from: StateId, label: Label, to: StateId },
    #[error("unknown state `{0}`")]
    UnknownState(StateId),
    #[error("`eps` cannot be an alphabet symbol")]
    EpsilonInAlphabet,
    #[error("`{0}` is not a valid action symbol")]
    InvalidSymbol(String),
    #[error("automaton is not saturated: {0} reaches the final state on `{1}` only through an eps edge")]
    NotSaturated(StateId, Symbol),
}

/// A validated GFA `(Q, A, T, F, q0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gfa {
    states: BTreeSet<StateId>,
    final_state: Option<StateId>,
    alphabet: BTreeSet<Symbol>,
    transitions: BTreeSet<Transition>,
    initial: StateId,
}

/// Checks the four structural GFA constraints and returns the automaton.
pub fn validate_gfa(raw: RawGfa) -> Result<Gfa, GfaError> {
    let states: BTreeSet<StateId> = raw.states.into_iter().collect();
    let alphabet: BTreeSet<Symbol> = raw.alphabet.into_iter().collect();
    if let Some(fin) = &raw.final_state {
        if *fin == raw.initial {
            return Err(GfaError::FinalIsInitial(fin.clone()));
        }
        if states.contains(fin) {
            return Err(GfaError::FinalAmongStates(fin.clone()));
        }
    }
    if !states.contains(&raw.initial) {
        return Err(GfaError::UnknownState(raw.initial));
    }
    for s in &alphabet {
        if s.as_str() == EPS {
            return Err(GfaError::EpsilonInAlphabet);
        }
        if !Symbol::is_valid_name(s.as_str()) {
            return Err(GfaError::InvalidSymbol(s.to_string()));
        }
    }
    let is_final = |q: &StateId| raw.final_state.as_ref() == Some(q);
    for t in &raw.transitions {
        if is_final(&t.source) {
            return Err(GfaError::OutgoingFromFinal { label: t.label.clone(), target: t.target.clone() });
        }
        if !states.contains(&t.source) {
            return Err(GfaError::UnknownState(t.source.clone()));
        }
        if !states.contains(&t.target) && !is_final(&t.target) {
            return Err(GfaError::UnknownState(t.target.clone()));
        }
        match &t.label {
            Label::Eps if !is_final(&t.target) => {
                return Err(GfaError::EpsilonToNonFinal { from: t.source.clone(), to: t.target.clone() });
            }
            Label::Sym(s) if !alphabet.contains(s) => {
                return Err(GfaError::UnknownLabel { from: t.source.clone(), label: t.label.clone(), to: t.target.clone() });
            }
            _ => {}
        }
    }
    Ok(Gfa {
        states,
        final_state: raw.final_state,
        alphabet,
        transitions: raw.transitions.into_iter().collect(),
        initial: raw.initial,
    })
}

impl Gfa {
    pub fn states(&self) -> &BTreeSet<StateId> {
        &self.states
    }

    pub fn final_state(&self) -> Option<&StateId> {
        self.final_state.as_ref()
    }

    pub fn alphabet(&self) -> &BTreeSet<Symbol> {
        &self.alphabet
    }

    pub fn transitions(&self) -> &BTreeSet<Transition> {
        &self.transitions
    }

    pub fn initial(&self) -> &StateId {
        &self.initial
    }

    pub fn is_final(&self, r: &str) -> bool {
        self.final_state.as_deref() == Some(r)
    }

    /// `Q ∪ F`.
    pub fn all_states(&self) -> impl Iterator<Item = &StateId> {
        self.states.iter().chain(self.final_state.iter())
    }

    pub fn contains_state(&self, r: &str) -> bool {
        self.states.contains(r) || self.is_final(r)
    }

    pub fn outgoing<'a>(&'a self, q: &'a str) -> impl Iterator<Item = &'a Transition> + 'a {
        self.transitions.iter().filter(move |t| t.source == q)
    }

    /// Outgoing edges grouped by source state.
    pub fn adjacency(&self) -> BTreeMap<&str, Vec<&Transition>> {
        let mut adj: BTreeMap<&str, Vec<&Transition>> = BTreeMap::new();
        for t in &self.transitions {
            adj.entry(t.source.as_str()).or_default().push(t);
        }
        adj
    }

    /// Whether `q` has an `eps` edge (necessarily into the final state).
    pub fn has_eps_edge(&self, q: &str) -> bool {
        self.outgoing(q).any(|t| t.label.is_eps())
    }

    pub fn to_raw(&self) -> RawGfa {
        RawGfa {
            states: self.states.iter().cloned().collect(),
            final_state: self.final_state.clone(),
            alphabet: self.alphabet.iter().cloned().collect(),
            transitions: self.transitions.iter().cloned().collect(),
            initial: self.initial.clone(),
        }
    }

    /// The same automaton started from another non-final state.
    pub fn with_initial(&self, q: &str) -> Result<Gfa, GfaError> {
        if self.is_final(q) {
            return Err(GfaError::FinalIsInitial(q.to_string()));
        }
        if !self.states.contains(q) {
            return Err(GfaError::UnknownState(q.to_string()));
        }
        let mut g = self.clone();
        g.initial = q.to_string();
        Ok(g)
    }

    /// Applies an injective renaming to every state id.
    pub fn rename_states(&self, mut f: impl FnMut(&str) -> StateId) -> Gfa {
        let map: BTreeMap<&StateId, StateId> = self.all_states().map(|r| (r, f(r))).collect();
        let image: BTreeSet<&StateId> = map.values().collect();
        assert_eq!(image.len(), map.len(), "state renaming must be injective");
        Gfa {
            states: self.states.iter().map(|q| map[q].clone()).collect(),
            final_state: self.final_state.as_ref().map(|r| map[r].clone()),
            alphabet: self.alphabet.clone(),
            transitions: self
                .transitions
                .iter()
                .map(|t| Transition::new(map[&t.source].clone(), t.label.clone(), map[&t.target].clone()))
                .collect(),
            initial: map[&self.initial].clone(),
        }
    }

    pub fn is_reduced(&self) -> bool {
        let reached = reach(self, &self.initial).expect("initial state exists");
        reached.len() == self.states.len() + usize::from(self.final_state.is_some())
    }

    /// Every `q ⇒a 1` is witnessed by a direct edge `q -a-> 1`.
    pub fn is_saturated(&self) -> bool {
        ops::missing_saturation_edges(self).is_empty()
    }

    /// No `eps` edges leave non-initial states.
    pub fn is_epsilon_free(&self) -> bool {
        self.transitions.iter().all(|t| !t.label.is_eps() || t.source == self.initial)
    }

    /// Every non-final state has exactly one non-final successor per symbol of `alpha`.
    pub fn is_semi_deterministic(&self, alpha: &BTreeSet<Symbol>) -> bool {
        self.states.iter().all(|q| {
            alpha.iter().all(|a| {
                self.outgoing(q)
                    .filter(|t| t.label.symbol() == Some(a) && self.states.contains(&t.target))
                    .count()
                    == 1
            })
        })
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn raw(ts: &[(&str, &str, &str)], fin: Option<&str>) -> RawGfa {
        RawGfa {
            states: vec!["q0".into(), "q1".into()],
            final_state: fin.map(str::to_string),
            alphabet: vec![Symbol::new("a")],
            transitions: ts.iter().map(|(s, l, t)| Transition::new(*s, Label::parse(l), *t)).collect(),
            initial: "q0".into(),
        }
    }

    #[test]
    fn a_plus_b_plus_is_valid() {
        let g = a_plus_b_plus();
        assert_eq!(g.states().len(), 2);
        assert_eq!(g.transitions().len(), 4);
    }

    #[test]
    fn empty_language_automaton_is_valid() {
        let g = gfa(&["q0"], None, &[], &[], "q0");
        assert!(g.final_state().is_none());
    }

    #[test]
    fn eps_into_non_final_is_rejected() {
        let err = validate_gfa(raw(&[("q0", "eps", "q1")], None)).unwrap_err();
        assert_eq!(err, GfaError::EpsilonToNonFinal { from: "q0".into(), to: "q1".into() });
    }

    #[test]
    fn each_structural_clause_has_its_own_error() {
        let mut r = raw(&[], Some("q0"));
        r.states = vec!["q1".into()];
        assert_eq!(validate_gfa(r).unwrap_err(), GfaError::FinalIsInitial("q0".into()));

        let err = validate_gfa(raw(&[("f", "a", "q0")], Some("f"))).unwrap_err();
        assert!(matches!(err, GfaError::OutgoingFromFinal { .. }));

        let err = validate_gfa(raw(&[("q0", "b", "q1")], None)).unwrap_err();
        assert!(matches!(err, GfaError::UnknownLabel { .. }));

        let err = validate_gfa(raw(&[("q0", "a", "zz")], None)).unwrap_err();
        assert_eq!(err, GfaError::UnknownState("zz".into()));

        let mut r = raw(&[], None);
        r.alphabet.push(Symbol::new("eps"));
        assert_eq!(validate_gfa(r).unwrap_err(), GfaError::EpsilonInAlphabet);
    }

    #[test]
    fn semi_determinism_depends_on_the_alphabet() {
        let ab: BTreeSet<Symbol> = ["a", "b"].into_iter().map(Symbol::new).collect();
        assert!(a_star_b_star_det().is_semi_deterministic(&ab));
        assert!(!a_star_b_star().is_semi_deterministic(&ab));
        let loop_a = gfa(&["q"], None, &["a"], &[("q", "a", "q")], "q");
        assert!(loop_a.is_semi_deterministic(&[Symbol::new("a")].into_iter().collect()));
    }

    #[test]
    fn words_print_compactly() {
        assert_eq!(Word::from_chars("abb").to_string(), "abb");
        assert_eq!(Word::empty().to_string(), "<eps>");
        assert_eq!(Word(vec![Symbol::new("ab"), Symbol::new("c")]).to_string(), "ab c");
        assert!(Word::from_chars("b") < Word::from_chars("aa"));
    }
}
