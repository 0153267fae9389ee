//! SFM0 terms, constant environments and processes.
//!
//! ```text
//! s ::= 0 | α.1 | a.p | s + s      guarded processes
//! p ::= s | C | x                  processes (x only in open terms)
//! ```

mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automata::{Label, Symbol};

pub use parse::{parse_open_term, parse_process, parse_term, ParseError};

/// A constant or variable name. Names starting with `_` are reserved for
/// generated constants.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Self {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_generated(&self) -> bool {
        self.0.starts_with('_')
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// SFM0 abstract syntax. Sums are binary trees exactly as written.
///
/// The derived order is the total term order used to sort summands.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Zero,
    /// `α.1`
    PrefixOne(Label),
    /// `a.p`
    Prefix(Symbol, Arc<Term>),
    Sum(Arc<Term>, Arc<Term>),
    Const(Name),
    Var(Name),
}

/// One step of a path from the root of a term to a subterm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sel {
    /// the body of a prefix `a.p`
    #[serde(rename = "P")]
    Body,
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

pub type Path = Vec<Sel>;

impl Term {
    pub fn one(label: Label) -> Term {
        Term::PrefixOne(label)
    }

    pub fn eps_one() -> Term {
        Term::PrefixOne(Label::Eps)
    }

    pub fn sym_one(a: &str) -> Term {
        Term::PrefixOne(Label::sym(a))
    }

    pub fn prefix(a: Symbol, body: Term) -> Term {
        Term::Prefix(a, Arc::new(body))
    }

    pub fn sum(l: Term, r: Term) -> Term {
        Term::Sum(Arc::new(l), Arc::new(r))
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(Name::new(name))
    }

    pub fn var(name: &str) -> Term {
        Term::Var(Name::new(name))
    }

    /// Left-nested sum `((t1 + t2) + t3) + ...`; the empty sum is `0`.
    pub fn sum_of(terms: impl IntoIterator<Item = Term>) -> Term {
        let mut it = terms.into_iter();
        match it.next() {
            None => Term::Zero,
            Some(first) => it.fold(first, Term::sum),
        }
    }

    /// The summands of the maximal sum tree rooted here, left to right.
    pub fn summands(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
            match t {
                Term::Sum(l, r) => {
                    go(l, out);
                    go(r, out);
                }
                _ => out.push(t),
            }
        }
        go(self, &mut out);
        out
    }

    /// Flattened summands sorted by the term order: the AC-canonical multiset.
    pub fn sorted_summands(&self) -> Vec<Term> {
        let mut v: Vec<Term> = self.summands().into_iter().cloned().collect();
        v.sort();
        v
    }

    pub fn is_sum(&self) -> bool {
        matches!(self, Term::Sum(..))
    }

    /// Category `s`: `0`, `α.1`, `a.p` or a sum of guarded terms.
    pub fn is_guarded(&self) -> bool {
        match self {
            Term::Zero | Term::PrefixOne(_) => true,
            Term::Prefix(_, p) => p.is_process(),
            Term::Sum(l, r) => l.is_guarded() && r.is_guarded(),
            Term::Const(_) | Term::Var(_) => false,
        }
    }

    /// Category `p` of the open syntax: guarded, a constant or a variable.
    pub fn is_process(&self) -> bool {
        matches!(self, Term::Const(_) | Term::Var(_)) || self.is_guarded()
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let Term::Var(x) = t {
                out.insert(x.clone());
            }
        });
        out
    }

    /// Constant names occurring syntactically in this term (no unfolding).
    pub fn constants_in(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let Term::Const(c) = t {
                out.insert(c.clone());
            }
        });
        out
    }

    /// Action symbols occurring in this term (no unfolding).
    pub fn symbols_in(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| match t {
            Term::Prefix(a, _) | Term::PrefixOne(Label::Sym(a)) => {
                out.insert(a.clone());
            }
            _ => {}
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        match self {
            Term::Prefix(_, p) => p.visit(f),
            Term::Sum(l, r) => {
                l.visit(f);
                r.visit(f);
            }
            _ => {}
        }
    }

    /// Simultaneous substitution of variables; unbound variables stay.
    pub fn substitute(&self, binding: &BTreeMap<Name, Term>) -> Term {
        if binding.is_empty() {
            return self.clone();
        }
        match self {
            Term::Var(x) => binding.get(x).cloned().unwrap_or_else(|| self.clone()),
            Term::Prefix(a, p) => Term::prefix(a.clone(), p.substitute(binding)),
            Term::Sum(l, r) => Term::sum(l.substitute(binding), r.substitute(binding)),
            _ => self.clone(),
        }
    }

    /// Like [`Term::substitute`] but fails on a free variable without a binding.
    pub fn substitute_strict(&self, binding: &BTreeMap<Name, Term>) -> Result<Term, TermError> {
        if let Some(x) = self.free_vars().into_iter().find(|x| !binding.contains_key(x)) {
            return Err(TermError::UnboundVariable(x));
        }
        Ok(self.substitute(binding))
    }

    /// `self{t/x}` for a single variable.
    pub fn subst1(&self, x: &Name, t: &Term) -> Term {
        self.substitute(&BTreeMap::from([(x.clone(), t.clone())]))
    }

    pub fn at(&self, path: &[Sel]) -> Option<&Term> {
        let Some((first, rest)) = path.split_first() else {
            return Some(self);
        };
        match (first, self) {
            (Sel::Body, Term::Prefix(_, p)) => p.at(rest),
            (Sel::Left, Term::Sum(l, _)) => l.at(rest),
            (Sel::Right, Term::Sum(_, r)) => r.at(rest),
            _ => None,
        }
    }

    /// This term with the subterm at `path` replaced by `new`.
    pub fn replace_at(&self, path: &[Sel], new: Term) -> Option<Term> {
        let Some((first, rest)) = path.split_first() else {
            return Some(new);
        };
        match (first, self) {
            (Sel::Body, Term::Prefix(a, p)) => Some(Term::prefix(a.clone(), p.replace_at(rest, new)?)),
            (Sel::Left, Term::Sum(l, r)) => Some(Term::Sum(Arc::new(l.replace_at(rest, new)?), r.clone())),
            (Sel::Right, Term::Sum(l, r)) => Some(Term::Sum(l.clone(), Arc::new(r.replace_at(rest, new)?))),
            _ => None,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Prefix(_, p) => 1 + p.size(),
            Term::Sum(l, r) => 1 + l.size() + r.size(),
            _ => 1,
        }
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_sum() {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Zero => f.write_str("0"),
            Term::PrefixOne(l) => write!(f, "{l}.1"),
            Term::Prefix(a, p) => {
                write!(f, "{a}.")?;
                p.fmt_operand(f)
            }
            Term::Sum(l, r) => {
                write!(f, "{l} + ")?;
                r.fmt_operand(f)
            }
            Term::Const(c) | Term::Var(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("constant `{0}` is not defined")]
    UndefinedConstant(Name),
    #[error("body of `{0}` is not a guarded process")]
    UnguardedBody(Name),
    #[error("constant `{0}` is defined twice")]
    DuplicateDefinition(Name),
    #[error("unbound variable `{0}`")]
    UnboundVariable(Name),
    #[error("definition of `{0}` contains a free variable")]
    OpenDefinition(Name),
    #[error("`{0}` is neither a guarded process nor a constant")]
    NotAProcess(String),
}

/// A finite map from constants to guarded bodies: `C ≐ s`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProcessEnv {
    defs: BTreeMap<Name, Term>,
}

impl ProcessEnv {
    pub fn new() -> Self {
        ProcessEnv::default()
    }

    pub fn get(&self, c: &Name) -> Option<&Term> {
        self.defs.get(c)
    }

    pub fn contains(&self, c: &Name) -> bool {
        self.defs.contains_key(c)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Term)> {
        self.defs.iter()
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    /// Adds `c ≐ body`; the body must be closed and guarded, and `c` new.
    pub fn define(&mut self, c: Name, body: Term) -> Result<(), TermError> {
        if !body.is_guarded() {
            return Err(TermError::UnguardedBody(c));
        }
        if !body.is_closed() {
            return Err(TermError::OpenDefinition(c));
        }
        if self.defs.contains_key(&c) {
            return Err(TermError::DuplicateDefinition(c));
        }
        self.defs.insert(c, body);
        Ok(())
    }

    /// Adds `c ≐ body`, replacing an existing definition. Used for internal
    /// environments where fresh names are known not to clash.
    pub(crate) fn insert(&mut self, c: Name, body: Term) {
        debug_assert!(body.is_guarded(), "unguarded body for {c}: {body}");
        self.defs.insert(c, body);
    }

    /// `δ(p, ∅)`: the constants used by `p`, including undefined ones.
    pub fn constants_of(&self, p: &Term) -> BTreeSet<Name> {
        let mut seen = BTreeSet::new();
        self.delta(p, &mut seen);
        seen
    }

    // δ(C, I) only inspects C's body when C ∉ I, and I only grows along a
    // branch, so sharing one accumulator across branches yields the same union.
    fn delta(&self, p: &Term, known: &mut BTreeSet<Name>) {
        match p {
            Term::Zero | Term::PrefixOne(_) | Term::Var(_) => {}
            Term::Prefix(_, q) => self.delta(q, known),
            Term::Sum(l, r) => {
                self.delta(l, known);
                self.delta(r, known);
            }
            Term::Const(c) => {
                if known.insert(c.clone()) {
                    if let Some(body) = self.defs.get(c) {
                        self.delta(body, known);
                    }
                }
            }
        }
    }

    /// Constants of `p` that have no definition.
    pub fn undefined_in(&self, p: &Term) -> BTreeSet<Name> {
        self.constants_of(p).into_iter().filter(|c| !self.defs.contains_key(c)).collect()
    }

    /// Keeps only the definitions reachable from `roots`.
    pub fn restricted_to<'a>(&self, roots: impl IntoIterator<Item = &'a Term>) -> ProcessEnv {
        let mut keep = BTreeSet::new();
        for r in roots {
            keep.extend(self.constants_of(r));
        }
        ProcessEnv { defs: self.defs.iter().filter(|(c, _)| keep.contains(*c)).map(|(c, b)| (c.clone(), b.clone())).collect() }
    }

    /// Action symbols reachable from `p`.
    pub fn alphabet_of(&self, p: &Term) -> BTreeSet<Symbol> {
        let mut out = p.symbols_in();
        for c in self.constants_of(p) {
            if let Some(b) = self.defs.get(&c) {
                out.extend(b.symbols_in());
            }
        }
        out
    }
}

/// A root term together with the definitions it may use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Process {
    pub root: Term,
    pub env: ProcessEnv,
}

impl Process {
    /// Checks the process conditions: root is guarded or a constant, and every
    /// constant it uses is defined.
    pub fn new(root: Term, env: ProcessEnv) -> Result<Process, TermError> {
        if let Some(x) = root.free_vars().into_iter().next() {
            return Err(TermError::UnboundVariable(x));
        }
        if !(root.is_guarded() || matches!(root, Term::Const(_))) {
            return Err(TermError::NotAProcess(root.to_string()));
        }
        if let Some(c) = env.undefined_in(&root).into_iter().next() {
            return Err(TermError::UndefinedConstant(c));
        }
        Ok(Process { root, env })
    }

    pub fn constants(&self) -> BTreeSet<Name> {
        self.env.constants_of(&self.root)
    }

    pub fn alphabet(&self) -> BTreeSet<Symbol> {
        self.env.alphabet_of(&self.root)
    }
}

/// Prints `NAME := body;` lines sorted by name, then `main root;`.
pub fn print_process(p: &Process) -> String {
    let mut out = String::new();
    for (c, body) in p.env.iter() {
        out.push_str(&format!("{c} := {body};\n"));
    }
    out.push_str(&format!("main {};\n", p.root));
    out
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_process(self))
    }
}

/// Whether a body has the shape `Σ a.C + Σ α.1` (zeros allowed).
fn is_sumform(t: &Term) -> bool {
    match t {
        Term::Zero | Term::PrefixOne(_) => true,
        Term::Prefix(_, p) => matches!(**p, Term::Const(_)),
        Term::Sum(l, r) => is_sumform(l) && is_sumform(r),
        Term::Const(_) | Term::Var(_) => false,
    }
}

/// `nf(p, ∅)`.
///
/// Unrolling the rules, `nf(p, ∅)` holds iff `p` and the body of every
/// constant in `δ(p, ∅)` are sums of `0`, `α.1` and `a.C`, and all those
/// constants are defined; that closure is what is computed here.
pub fn is_normal_form(p: &Process) -> bool {
    let root_ok = match &p.root {
        Term::Const(_) => true,
        t => is_sumform(t),
    };
    root_ok
        && p.env.constants_of(&p.root).iter().all(|c| p.env.get(c).is_some_and(is_sumform))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn proc(text: &str) -> Process {
        parse_process(text).unwrap()
    }

    #[test]
    fn delta_of_the_semantics_example() {
        let p = proc("C := (a.C + eps.1) + b.D; D := b.D + eps.1; main C;");
        let cs: Vec<String> = p.constants().iter().map(|c| c.to_string()).collect();
        assert_eq!(cs, ["C", "D"]);
        assert!(ProcessEnv::new().constants_of(&Term::Zero).is_empty());
        let loop_c = proc("C := a.C; main C;");
        assert_eq!(loop_c.constants().len(), 1);
    }

    #[test]
    fn guardedness() {
        let t = parse_term("a.C + eps.1").unwrap();
        assert!(t.is_guarded());
        assert!(!Term::constant("C").is_guarded());
        assert!(!Term::var("x").is_guarded());
        assert!(Term::prefix(Symbol::new("a"), Term::var("x")).is_guarded());
    }

    #[test]
    fn substitution_closes_open_terms() {
        let p1 = parse_open_term("a.(b.1 + c.x)", &["x"]).unwrap();
        let r = parse_term("d.0").unwrap();
        let closed = p1.subst1(&Name::new("x"), &r);
        assert_eq!(closed.to_string(), "a.(b.1 + c.d.0)");
        assert_eq!(closed, parse_term("a.(b.1 + c.d.0)").unwrap());
        let c = parse_term("a.1 + b.C").unwrap();
        assert_eq!(c.substitute(&BTreeMap::new()), c);
        let c1 = parse_open_term("a.x", &["x"]).unwrap();
        assert_eq!(c1.subst1(&Name::new("x"), &r).to_string(), "a.d.0");
        assert!(matches!(
            c1.substitute_strict(&BTreeMap::new()),
            Err(TermError::UnboundVariable(_))
        ));
    }

    #[test]
    fn normal_form_examples() {
        assert!(!is_normal_form(&proc("main a.b.1;")));
        assert!(!is_normal_form(&proc("C := a.b.C + b.eps.1; main C;")));
        assert!(!is_normal_form(&proc("main b.0;")));
        assert!(is_normal_form(&proc("C0 := a.C0 + b.C1 + eps.1; C1 := b.C1 + eps.1; main C0;")));
        assert!(is_normal_form(&proc("main 0;")));
    }

    #[test]
    fn printing_parenthesises_right_nested_sums() {
        let t = Term::sum(Term::sym_one("a"), Term::sum(Term::sym_one("b"), Term::Zero));
        assert_eq!(t.to_string(), "a.1 + (b.1 + 0)");
        assert_eq!(parse_term(&t.to_string()).unwrap(), t);
        let u = Term::sum_of([Term::sym_one("a"), Term::sym_one("b"), Term::eps_one()]);
        assert_eq!(u.to_string(), "a.1 + b.1 + eps.1");
    }

    #[test]
    fn paths_address_subterms() {
        let t = parse_term("a.(b.1 + c.1) + 0").unwrap();
        assert_eq!(t.at(&[Sel::Left, Sel::Body, Sel::Right]).unwrap(), &Term::sym_one("c"));
        let u = t.replace_at(&[Sel::Right], Term::eps_one()).unwrap();
        assert_eq!(u.to_string(), "a.(b.1 + c.1) + eps.1");
        assert!(t.at(&[Sel::Body]).is_none());
    }
}
