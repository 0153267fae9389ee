//! Right-linear grammars with productions `A -> a B`, `A -> a` and `A -> eps`,
//! and their one-to-one translation to and from GFAs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::automata::{validate_gfa, Gfa, Label, RawGfa, Symbol, Transition};

/// Id of the final state produced by [`grammar_to_gfa`].
pub const FINAL_STATE: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rhs {
    /// `a B`
    Step(Symbol, String),
    /// `a`
    Terminal(Symbol),
    /// `eps`
    Empty,
}

impl fmt::Display for Rhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rhs::Step(a, b) => write!(f, "{a} {b}"),
            Rhs::Terminal(a) => write!(f, "{a}"),
            Rhs::Empty => f.write_str("eps"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("start symbol `{0}` is not a nonterminal")]
    UnknownStart(String),
    #[error("unknown nonterminal `{0}`")]
    UnknownNonterminal(String),
    #[error("`{0}` is not a valid nonterminal name")]
    InvalidNonterminal(String),
    #[error("`{0}` is not a valid terminal symbol")]
    InvalidTerminal(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    nonterminals: BTreeSet<String>,
    start: String,
    productions: BTreeSet<(String, Rhs)>,
}

pub fn is_nonterminal_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Grammar {
    pub fn new(
        nonterminals: impl IntoIterator<Item = String>,
        start: impl Into<String>,
        productions: impl IntoIterator<Item = (String, Rhs)>,
    ) -> Result<Grammar, GrammarError> {
        let nonterminals: BTreeSet<String> = nonterminals.into_iter().collect();
        let start = start.into();
        let productions: BTreeSet<(String, Rhs)> = productions.into_iter().collect();
        for n in &nonterminals {
            if !is_nonterminal_name(n) {
                return Err(GrammarError::InvalidNonterminal(n.clone()));
            }
        }
        if !nonterminals.contains(&start) {
            return Err(GrammarError::UnknownStart(start));
        }
        for (lhs, rhs) in &productions {
            if !nonterminals.contains(lhs) {
                return Err(GrammarError::UnknownNonterminal(lhs.clone()));
            }
            match rhs {
                Rhs::Step(a, b) => {
                    if !Symbol::is_valid_name(a.as_str()) {
                        return Err(GrammarError::InvalidTerminal(a.to_string()));
                    }
                    if !nonterminals.contains(b) {
                        return Err(GrammarError::UnknownNonterminal(b.clone()));
                    }
                }
                Rhs::Terminal(a) if !Symbol::is_valid_name(a.as_str()) => {
                    return Err(GrammarError::InvalidTerminal(a.to_string()));
                }
                _ => {}
            }
        }
        Ok(Grammar { nonterminals, start, productions })
    }

    pub fn nonterminals(&self) -> &BTreeSet<String> {
        &self.nonterminals
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn productions(&self) -> &BTreeSet<(String, Rhs)> {
        &self.productions
    }

    pub fn productions_of<'a>(&'a self, lhs: &'a str) -> impl Iterator<Item = &'a Rhs> + 'a {
        self.productions.iter().filter(move |(l, _)| l == lhs).map(|(_, r)| r)
    }
}

/// One transition per production; the final state `1` exists only if some
/// production ends the derivation.
pub fn grammar_to_gfa(gr: &Grammar) -> Gfa {
    let mut raw = RawGfa {
        states: gr.nonterminals.iter().cloned().collect(),
        initial: gr.start.clone(),
        ..RawGfa::default()
    };
    let mut alphabet = BTreeSet::new();
    for (lhs, rhs) in &gr.productions {
        let t = match rhs {
            Rhs::Step(a, b) => {
                alphabet.insert(a.clone());
                Transition::new(lhs.clone(), Label::Sym(a.clone()), b.clone())
            }
            Rhs::Terminal(a) => {
                alphabet.insert(a.clone());
                Transition::new(lhs.clone(), Label::Sym(a.clone()), FINAL_STATE)
            }
            Rhs::Empty => Transition::new(lhs.clone(), Label::Eps, FINAL_STATE),
        };
        if t.target == FINAL_STATE {
            raw.final_state = Some(FINAL_STATE.to_string());
        }
        raw.transitions.push(t);
    }
    raw.alphabet = alphabet.into_iter().collect();
    validate_gfa(raw).expect("a grammar always yields a GFA")
}

/// Inverse of [`grammar_to_gfa`]: each non-final state becomes a nonterminal.
///
/// State ids are kept when they are all valid nonterminal names; otherwise
/// every state is renamed `N0, N1, ...` in id order with the initial state first.
pub fn gfa_to_grammar(g: &Gfa) -> Grammar {
    let keep = g.states().iter().all(|q| is_nonterminal_name(q));
    let names: BTreeMap<&str, String> = if keep {
        g.states().iter().map(|q| (q.as_str(), q.clone())).collect()
    } else {
        std::iter::once(g.initial())
            .chain(g.states().iter().filter(|q| *q != g.initial()))
            .enumerate()
            .map(|(i, q)| (q.as_str(), format!("N{i}")))
            .collect()
    };
    let productions = g.transitions().iter().map(|t| {
        let rhs = match (&t.label, g.is_final(&t.target)) {
            (Label::Eps, _) => Rhs::Empty,
            (Label::Sym(a), true) => Rhs::Terminal(a.clone()),
            (Label::Sym(a), false) => Rhs::Step(a.clone(), names[t.target.as_str()].clone()),
        };
        (names[t.source.as_str()].clone(), rhs)
    });
    Grammar::new(names.values().cloned(), names[g.initial().as_str()].clone(), productions)
        .expect("automaton states give well-formed nonterminals")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::isomorphic;

    fn sym(a: &str) -> Symbol {
        Symbol::new(a)
    }

    pub(crate) fn a_plus_b_plus_grammar() -> Grammar {
        Grammar::new(
            ["A".to_string(), "B".to_string()],
            "A",
            [
                ("A".to_string(), Rhs::Step(sym("a"), "A".into())),
                ("A".to_string(), Rhs::Step(sym("a"), "B".into())),
                ("B".to_string(), Rhs::Step(sym("b"), "B".into())),
                ("B".to_string(), Rhs::Terminal(sym("b"))),
            ],
        )
        .unwrap()
    }

    #[test]
    fn a_plus_b_plus_grammar_compiles() {
        let g = grammar_to_gfa(&a_plus_b_plus_grammar());
        assert_eq!(g.states().len(), 2);
        assert_eq!(g.final_state().map(String::as_str), Some("1"));
        assert_eq!(g.transitions().len(), 4);
        assert!(isomorphic(&g, &crate::automata::fixtures::a_plus_b_plus()).is_some());
    }

    #[test]
    fn single_eps_production() {
        let gr = Grammar::new(["A".to_string()], "A", [("A".to_string(), Rhs::Empty)]).unwrap();
        let g = grammar_to_gfa(&gr);
        assert_eq!(g.transitions().iter().next().unwrap(), &Transition::new("A", Label::Eps, "1"));
        assert_eq!(gfa_to_grammar(&g), gr);
    }

    #[test]
    fn roundtrip_is_identity() {
        let gr = a_plus_b_plus_grammar();
        assert_eq!(gfa_to_grammar(&grammar_to_gfa(&gr)), gr);
    }

    #[test]
    fn deadlocks_become_empty_nonterminals() {
        let gr = Grammar::new(
            ["A".to_string(), "D".to_string()],
            "A",
            [("A".to_string(), Rhs::Step(sym("a"), "D".into()))],
        )
        .unwrap();
        let g = grammar_to_gfa(&gr);
        assert!(g.final_state().is_none());
        assert_eq!(gfa_to_grammar(&g), gr);
    }

    #[test]
    fn references_must_be_declared() {
        let err = Grammar::new(["A".to_string()], "A", [("A".to_string(), Rhs::Step(sym("a"), "B".into()))]);
        assert_eq!(err.unwrap_err(), GrammarError::UnknownNonterminal("B".into()));
        assert_eq!(
            Grammar::new(["A".to_string()], "S", []).unwrap_err(),
            GrammarError::UnknownStart("S".into())
        );
    }

    #[test]
    fn lowercase_states_are_renamed() {
        let g = crate::automata::fixtures::a_star_b_star();
        let gr = gfa_to_grammar(&g);
        assert_eq!(gr.start(), "N0");
        assert!(isomorphic(&grammar_to_gfa(&gr), &g).is_some());
    }
}
