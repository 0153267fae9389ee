//! From terms to GFAs and back.
//!
//! [`denote`] follows the compositional construction with an accumulator of
//! already expanded constants, states being printed terms and `1` the final
//! state. [`reachable_gfa`] builds the same automaton by exploring the moves
//! of each term directly; it is the faster of the two on large systems.

mod open;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::automata::{reach, validate_gfa, Gfa, Label, RawGfa, StateId, Symbol, Transition};
use crate::term::{Name, Process, ProcessEnv, Term};

pub use open::{lfp_language_up_to, open_languages_up_to, OpenLanguages};

/// Id of the final state in every denotation.
pub const FINAL: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("constant `{0}` is not defined")]
    UndefinedConstant(Name),
    #[error("body of `{0}` is not a guarded process")]
    UnguardedBody(Name),
    #[error("automaton is not reduced: `{0}` is unreachable")]
    NotReduced(StateId),
    #[error("the variable language contains the empty word")]
    EpsilonInVarLanguage,
}

/// An intermediate automaton of the construction; `final_state` says whether `1` is present.
#[derive(Clone, Debug)]
struct Part {
    states: BTreeSet<String>,
    alphabet: BTreeSet<Symbol>,
    trans: BTreeSet<(String, Label, String)>,
    final_state: bool,
    initial: String,
}

impl Part {
    fn leaf(name: String) -> Part {
        Part {
            states: BTreeSet::from([name.clone()]),
            alphabet: BTreeSet::new(),
            trans: BTreeSet::new(),
            final_state: false,
            initial: name,
        }
    }

    fn reaches_initial(&self) -> bool {
        self.trans.iter().any(|(_, _, t)| *t == self.initial)
    }

    /// Drops the initial state and its outgoing edges unless some edge enters it.
    fn pruned(&self) -> (BTreeSet<String>, BTreeSet<(String, Label, String)>) {
        if self.reaches_initial() {
            (self.states.clone(), self.trans.clone())
        } else {
            let mut states = self.states.clone();
            states.remove(&self.initial);
            let trans = self.trans.iter().filter(|(s, _, _)| *s != self.initial).cloned().collect();
            (states, trans)
        }
    }

    fn initial_moves(&self) -> impl Iterator<Item = &(String, Label, String)> {
        self.trans.iter().filter(move |(s, _, _)| *s == self.initial)
    }
}

struct Denoter<'a> {
    env: &'a ProcessEnv,
    closure: BTreeMap<Name, BTreeSet<Name>>,
    memo: BTreeMap<(Name, BTreeSet<Name>), Part>,
}

impl Denoter<'_> {
    fn den(&mut self, t: &Term, known: &BTreeSet<Name>) -> Part {
        match t {
            Term::Zero | Term::Var(_) => Part::leaf(t.to_string()),
            Term::PrefixOne(l) => {
                let s = t.to_string();
                let mut p = Part::leaf(s.clone());
                if let Label::Sym(a) = l {
                    p.alphabet.insert(a.clone());
                }
                p.trans.insert((s, l.clone(), FINAL.to_string()));
                p.final_state = true;
                p
            }
            Term::Prefix(a, body) => {
                let mut p = self.den(body, known);
                let s = t.to_string();
                p.trans.insert((s.clone(), Label::Sym(a.clone()), p.initial.clone()));
                p.states.insert(s.clone());
                p.alphabet.insert(a.clone());
                p.initial = s;
                p
            }
            Term::Sum(l, r) => {
                let p1 = self.den(l, known);
                let p2 = self.den(r, known);
                let s = t.to_string();
                let (q1, t1) = p1.pruned();
                let (q2, t2) = p2.pruned();
                let mut states: BTreeSet<String> = q1.into_iter().chain(q2).collect();
                states.insert(s.clone());
                let mut trans: BTreeSet<_> = t1.into_iter().chain(t2).collect();
                for (_, a, r) in p1.initial_moves().chain(p2.initial_moves()) {
                    trans.insert((s.clone(), a.clone(), r.clone()));
                }
                Part {
                    states,
                    alphabet: p1.alphabet.union(&p2.alphabet).cloned().collect(),
                    trans,
                    final_state: p1.final_state || p2.final_state,
                    initial: s,
                }
            }
            Term::Const(c) => {
                if known.contains(c) {
                    return Part::leaf(c.to_string());
                }
                let relevant: BTreeSet<Name> = known.intersection(&self.closure[c]).cloned().collect();
                let key = (c.clone(), relevant);
                if let Some(p) = self.memo.get(&key) {
                    return p.clone();
                }
                let body = self.env.get(c).expect("checked before the construction").clone();
                let mut inner = known.clone();
                inner.insert(c.clone());
                let p = self.den(&body, &inner);
                let (mut states, mut trans) = p.pruned();
                let name = c.to_string();
                for (_, a, r) in p.initial_moves() {
                    trans.insert((name.clone(), a.clone(), r.clone()));
                }
                states.insert(name.clone());
                let out = Part { states, alphabet: p.alphabet, trans, final_state: p.final_state, initial: name };
                self.memo.insert(key, out.clone());
                out
            }
        }
    }
}

fn check_env(root: &Term, env: &ProcessEnv) -> Result<(), SemanticsError> {
    for c in env.constants_of(root) {
        match env.get(&c) {
            None => return Err(SemanticsError::UndefinedConstant(c)),
            Some(b) if !b.is_guarded() => return Err(SemanticsError::UnguardedBody(c)),
            _ => {}
        }
    }
    Ok(())
}

fn to_gfa(states: BTreeSet<String>, alphabet: BTreeSet<Symbol>, trans: BTreeSet<(String, Label, String)>, final_state: bool, initial: String) -> Gfa {
    validate_gfa(RawGfa {
        states: states.into_iter().collect(),
        final_state: final_state.then(|| FINAL.to_string()),
        alphabet: alphabet.into_iter().collect(),
        transitions: trans.into_iter().map(|(s, l, t)| Transition::new(s, l, t)).collect(),
        initial,
    })
    .expect("the construction yields a GFA")
}

/// The GFA of a term under `env`, built by the compositional construction.
/// Free variables become deadlocked leaf states named after the variable.
pub fn denote_term(root: &Term, env: &ProcessEnv) -> Result<Gfa, SemanticsError> {
    check_env(root, env)?;
    let closure = env.constants_of(root).into_iter().map(|c| {
        let cl = env.constants_of(&Term::Const(c.clone()));
        (c, cl)
    });
    let mut d = Denoter { env, closure: closure.collect(), memo: BTreeMap::new() };
    let p = d.den(root, &BTreeSet::new());
    Ok(to_gfa(p.states, p.alphabet, p.trans, p.final_state, p.initial))
}

/// `⟦p⟧∅`.
pub fn denote(p: &Process) -> Result<Gfa, SemanticsError> {
    denote_term(&p.root, &p.env)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Step {
    Final,
    To(Term),
}

/// Outgoing moves of a term: `α.1` moves to the final state, `a.p` to `p`,
/// sums combine, constants behave as their bodies.
pub(crate) fn moves(t: &Term, env: &ProcessEnv) -> Vec<(Label, Step)> {
    let mut out = Vec::new();
    fn go(t: &Term, env: &ProcessEnv, out: &mut Vec<(Label, Step)>) {
        match t {
            Term::Zero | Term::Var(_) => {}
            Term::PrefixOne(l) => out.push((l.clone(), Step::Final)),
            Term::Prefix(a, p) => out.push((Label::Sym(a.clone()), Step::To((**p).clone()))),
            Term::Sum(l, r) => {
                go(l, env, out);
                go(r, env, out);
            }
            Term::Const(c) => go(env.get(c).expect("defined constant"), env, out),
        }
    }
    go(t, env, &mut out);
    out
}

/// Terms reachable from `root` through [`moves`], in breadth-first discovery order.
pub(crate) fn reachable_terms(root: &Term, env: &ProcessEnv) -> Vec<Term> {
    let mut seen: BTreeSet<Term> = BTreeSet::from([root.clone()]);
    let mut order = vec![root.clone()];
    let mut queue = VecDeque::from([root.clone()]);
    while let Some(t) = queue.pop_front() {
        for (_, s) in moves(&t, env) {
            if let Step::To(u) = s {
                if seen.insert(u.clone()) {
                    order.push(u.clone());
                    queue.push_back(u);
                }
            }
        }
    }
    order
}

/// The same automaton as [`denote_term`], computed by exploring moves.
pub fn reachable_gfa(root: &Term, env: &ProcessEnv) -> Result<Gfa, SemanticsError> {
    check_env(root, env)?;
    let mut states = BTreeSet::new();
    let mut trans = BTreeSet::new();
    let mut alphabet = BTreeSet::new();
    let mut final_state = false;
    for t in reachable_terms(root, env) {
        let s = t.to_string();
        for (l, step) in moves(&t, env) {
            if let Label::Sym(a) = &l {
                alphabet.insert(a.clone());
            }
            let target = match step {
                Step::Final => {
                    final_state = true;
                    FINAL.to_string()
                }
                Step::To(u) => u.to_string(),
            };
            trans.insert((s.clone(), l, target));
        }
        states.insert(s);
    }
    Ok(to_gfa(states, alphabet, trans, final_state, root.to_string()))
}

/// Representability: one constant `Ci` per non-final state (`C0` for the
/// initial one, then the others in id order).
///
/// Each body lists the transitions to non-final states sorted by (label,
/// target), then those to the final state sorted by label; a deadlock is `0`.
pub fn gfa_to_term(g: &Gfa) -> Result<Process, SemanticsError> {
    let reached = reach(g, g.initial()).expect("initial state exists");
    if let Some(q) = g.all_states().find(|q| !reached.contains(*q)) {
        return Err(SemanticsError::NotReduced(q.clone()));
    }
    let order: Vec<&StateId> =
        std::iter::once(g.initial()).chain(g.states().iter().filter(|q| *q != g.initial())).collect();
    let names: BTreeMap<&str, Name> =
        order.iter().enumerate().map(|(i, q)| (q.as_str(), Name::new(&format!("C{i}")))).collect();
    let mut env = ProcessEnv::new();
    for q in &order {
        let mut nonfinal: Vec<(&Label, &StateId)> = Vec::new();
        let mut terminal: Vec<&Label> = Vec::new();
        for t in g.outgoing(q) {
            if g.is_final(&t.target) {
                terminal.push(&t.label);
            } else {
                nonfinal.push((&t.label, &t.target));
            }
        }
        nonfinal.sort();
        terminal.sort();
        let summands = nonfinal
            .into_iter()
            .map(|(l, target)| {
                let a = l.symbol().expect("eps edges only enter the final state").clone();
                Term::prefix(a, Term::Const(names[target.as_str()].clone()))
            })
            .chain(terminal.into_iter().map(|l| Term::one(l.clone())));
        env.define(names[q.as_str()].clone(), Term::sum_of(summands)).expect("fresh names, guarded bodies");
    }
    Ok(Process::new(Term::Const(names[g.initial().as_str()].clone()), env).expect("all constants defined"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::fixtures::*;
    use crate::automata::{isomorphic, language_up_to, Word};
    use crate::term::{parse_process, parse_term};

    fn proc(text: &str) -> Process {
        parse_process(text).unwrap()
    }

    fn edges(g: &Gfa) -> BTreeSet<(String, String, String)> {
        g.transitions().iter().map(|t| (t.source.clone(), t.label.to_string(), t.target.clone())).collect()
    }

    #[test]
    fn worked_example() {
        let p = proc("C := (a.C + eps.1) + b.D; D := b.D + eps.1; main C;");
        let g = denote(&p).unwrap();
        let states: Vec<&str> = g.all_states().map(String::as_str).collect();
        assert_eq!(states, ["C", "D", "1"]);
        let expect: BTreeSet<(String, String, String)> =
            [("C", "a", "C"), ("C", "eps", "1"), ("C", "b", "D"), ("D", "b", "D"), ("D", "eps", "1")]
                .iter()
                .map(|(s, l, t)| (s.to_string(), l.to_string(), t.to_string()))
                .collect();
        assert_eq!(edges(&g), expect);
        let f = isomorphic(&g, &a_star_b_star()).unwrap();
        assert_eq!(f["C"], "q0");
        assert_eq!(f["D"], "q1");
        assert_eq!(f["1"], "r0");
        assert_eq!(reachable_gfa(&p.root, &p.env).unwrap(), g);
    }

    #[test]
    fn base_cases() {
        let g = denote(&proc("main 0;")).unwrap();
        assert_eq!(g.states().len(), 1);
        assert!(g.final_state().is_none() && g.transitions().is_empty() && g.alphabet().is_empty());
        let e = denote(&proc("main eps.1;")).unwrap();
        assert_eq!(e.states().len(), 1);
        assert!(e.alphabet().is_empty());
        assert_eq!(edges(&e).len(), 1);
    }

    #[test]
    fn sum_keeps_summands_that_are_reentered() {
        // a.(b.1 + c.1) + a.0 : the inner sum is reached, a.0's target too
        let p = proc("main a.(b.1 + c.1) + a.0;");
        let g = denote(&p).unwrap();
        assert_eq!(g, reachable_gfa(&p.root, &p.env).unwrap());
        assert_eq!(g.states().len(), 3);
    }

    #[test]
    fn unfolding_changes_the_state_count() {
        let c = proc("C := a.a.C + eps.1; main C;");
        let body = proc("C := a.a.C + eps.1; main a.a.C + eps.1;");
        assert_eq!(denote(&c).unwrap().states().len(), 2);
        assert_eq!(denote(&body).unwrap().states().len(), 3);
    }

    #[test]
    fn gfa_to_term_examples() {
        let p = gfa_to_term(&a_star_b_star()).unwrap();
        assert_eq!(p.env.get(&Name::new("C0")).unwrap(), &parse_term("a.C0 + b.C1 + eps.1").unwrap());
        assert_eq!(p.env.get(&Name::new("C1")).unwrap(), &parse_term("b.C1 + eps.1").unwrap());
        assert!(isomorphic(&denote(&p).unwrap(), &a_star_b_star()).is_some());

        let b_plus_with_dead_end = gfa(&["q6", "q7"], Some("r1"), &["a", "b"], &[("q6", "b", "q6"), ("q6", "a", "q7"), ("q6", "b", "r1")], "q6");
        let p = gfa_to_term(&b_plus_with_dead_end).unwrap();
        assert_eq!(p.env.get(&Name::new("C0")).unwrap(), &parse_term("a.C1 + b.C0 + b.1").unwrap());
        assert_eq!(p.env.get(&Name::new("C1")).unwrap(), &Term::Zero);

        let dead = gfa(&["q"], None, &[], &[], "q");
        assert_eq!(gfa_to_term(&dead).unwrap().env.get(&Name::new("C0")).unwrap(), &Term::Zero);
    }

    #[test]
    fn non_reduced_input_is_rejected() {
        let g = gfa(&["p", "q"], None, &["a"], &[("q", "a", "p")], "p");
        assert_eq!(gfa_to_term(&g).unwrap_err(), SemanticsError::NotReduced("q".into()));
    }

    #[test]
    fn languages_of_basic_terms() {
        let lang = |text: &str, k| language_up_to(&denote(&proc(text)).unwrap(), k);
        assert!(lang("main 0;", 4).is_empty());
        assert_eq!(lang("main eps.1;", 4), BTreeSet::from([Word::empty()]));
        assert_eq!(lang("main a.b.1 + a.eps.1;", 4).len(), 2);
    }
}
