//! The axioms of `W` and their instantiation.
//!
//! ```text
//! A1  x + (y + z) = (x + y) + z      T1  a.0 = 0
//! A2  x + y = y + x                  T2  a.(x + y) = a.x + a.y
//! A3  x + 0 = x                      T3  a.eps.1 = a.1
//! A4  x + x = x
//! R1  C ≐ p  ⇒  C = p
//! R2  C ≐ p{C/x} ∧ q = p{q/x}  ⇒  C = q      (C ∉ const(p))
//! ```
//!
//! The metavariables `x, y, z` stand for guarded terms only: a constant or a
//! variable cannot be a summand, so instances such as `C + D` are rejected.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automata::{Label, Symbol};
use crate::term::{Sel, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axiom {
    A1,
    A2,
    A3,
    A4,
    T1,
    T2,
    T3,
    R1,
    R2,
}

/// The full set `W`.
pub const W: [Axiom; 9] = [Axiom::A1, Axiom::A2, Axiom::A3, Axiom::A4, Axiom::T1, Axiom::T2, Axiom::T3, Axiom::R1, Axiom::R2];

/// The subset `B` of choice laws plus unfolding and folding.
pub const B: [Axiom; 6] = [Axiom::A1, Axiom::A2, Axiom::A3, Axiom::A4, Axiom::R1, Axiom::R2];

impl Axiom {
    /// R1 and R2 hold under a side condition on the definitions.
    pub fn is_conditional(self) -> bool {
        matches!(self, Axiom::R1 | Axiom::R2)
    }

    pub fn name(self) -> &'static str {
        match self {
            Axiom::A1 => "A1",
            Axiom::A2 => "A2",
            Axiom::A3 => "A3",
            Axiom::A4 => "A4",
            Axiom::T1 => "T1",
            Axiom::T2 => "T2",
            Axiom::T3 => "T3",
            Axiom::R1 => "R1",
            Axiom::R2 => "R2",
        }
    }

    pub fn parse(s: &str) -> Option<Axiom> {
        W.into_iter().find(|a| a.name() == s)
    }

    /// The metavariables the axiom needs, with `a` for the action.
    fn metavars(self) -> &'static [&'static str] {
        match self {
            Axiom::A1 => &["x", "y", "z"],
            Axiom::A2 => &["x", "y"],
            Axiom::A3 | Axiom::A4 => &["x"],
            Axiom::T1 | Axiom::T3 => &["a"],
            Axiom::T2 => &["a", "x", "y"],
            Axiom::R1 | Axiom::R2 => &[],
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dir {
    /// rewrite an instance of the left side into the right side
    #[serde(rename = "LR")]
    LeftToRight,
    #[serde(rename = "RL")]
    RightToLeft,
}

/// A binding of the metavariables of an axiom.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subst {
    pub action: Option<Symbol>,
    pub terms: BTreeMap<String, Term>,
}

impl Subst {
    pub fn new() -> Self {
        Subst::default()
    }

    pub fn with_action(mut self, a: Symbol) -> Self {
        self.action = Some(a);
        self
    }

    pub fn with(mut self, var: &str, t: Term) -> Self {
        self.terms.insert(var.to_string(), t);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("the subterm does not match the {0} side of {1}")]
    NoMatch(&'static str, Axiom),
    #[error("illegal instantiation of {0}: {1}")]
    IllegalInstantiation(Axiom, String),
    #[error("path does not address a subterm")]
    BadPath,
    #[error("{0} is applied through its own proof rule")]
    Conditional(Axiom),
}

fn var(s: &Subst, ax: Axiom, x: &str) -> Result<Term, AxiomError> {
    let t = s
        .terms
        .get(x)
        .ok_or_else(|| AxiomError::IllegalInstantiation(ax, format!("`{x}` is not bound")))?;
    if !t.is_closed() || !t.is_guarded() {
        return Err(AxiomError::IllegalInstantiation(ax, format!("`{x}` ↦ `{t}` is not a guarded closed term")));
    }
    Ok(t.clone())
}

/// Both sides of `ax` under `s`, as `(left, right)`.
pub fn instantiate(ax: Axiom, s: &Subst) -> Result<(Term, Term), AxiomError> {
    if ax.is_conditional() {
        return Err(AxiomError::Conditional(ax));
    }
    let wanted = ax.metavars();
    if let Some(extra) = s.terms.keys().find(|k| !wanted.contains(&k.as_str())) {
        return Err(AxiomError::IllegalInstantiation(ax, format!("`{extra}` is not a metavariable")));
    }
    let action = || {
        s.action.clone().ok_or_else(|| AxiomError::IllegalInstantiation(ax, "the action `a` is not bound".into()))
    };
    if s.action.is_some() && !wanted.contains(&"a") {
        return Err(AxiomError::IllegalInstantiation(ax, "`a` is not a metavariable".into()));
    }
    let sum = Term::sum;
    Ok(match ax {
        Axiom::A1 => {
            let (x, y, z) = (var(s, ax, "x")?, var(s, ax, "y")?, var(s, ax, "z")?);
            (sum(x.clone(), sum(y.clone(), z.clone())), sum(sum(x, y), z))
        }
        Axiom::A2 => {
            let (x, y) = (var(s, ax, "x")?, var(s, ax, "y")?);
            (sum(x.clone(), y.clone()), sum(y, x))
        }
        Axiom::A3 => {
            let x = var(s, ax, "x")?;
            (sum(x.clone(), Term::Zero), x)
        }
        Axiom::A4 => {
            let x = var(s, ax, "x")?;
            (sum(x.clone(), x.clone()), x)
        }
        Axiom::T1 => (Term::prefix(action()?, Term::Zero), Term::Zero),
        Axiom::T2 => {
            let (a, x, y) = (action()?, var(s, ax, "x")?, var(s, ax, "y")?);
            (
                Term::prefix(a.clone(), sum(x.clone(), y.clone())),
                sum(Term::prefix(a.clone(), x), Term::prefix(a, y)),
            )
        }
        Axiom::T3 => {
            let a = action()?;
            (Term::prefix(a.clone(), Term::eps_one()), Term::one(Label::Sym(a)))
        }
        Axiom::R1 | Axiom::R2 => unreachable!(),
    })
}

/// Rewrites the subterm of `t` at `path` with `ax` in direction `dir`.
pub fn apply_axiom(t: &Term, ax: Axiom, path: &[Sel], dir: Dir, s: &Subst) -> Result<Term, AxiomError> {
    let redex = t.at(path).ok_or(AxiomError::BadPath)?;
    let (l, r) = instantiate(ax, s)?;
    let (from, to, side) = match dir {
        Dir::LeftToRight => (l, r, "left"),
        Dir::RightToLeft => (r, l, "right"),
    };
    if *redex != from {
        return Err(AxiomError::NoMatch(side, ax));
    }
    Ok(t.replace_at(path, to).expect("path checked above"))
}

/// Finds the binding under which `redex` is an instance of the `dir` source
/// side of `ax`. `action` supplies `a` when the source side does not contain
/// it (`0` for T1 right-to-left).
pub fn match_axiom(ax: Axiom, dir: Dir, redex: &Term, action: Option<&Symbol>) -> Option<Subst> {
    use Dir::*;
    let s = Subst::new();
    let sum_parts = |t: &Term| match t {
        Term::Sum(l, r) => Some(((**l).clone(), (**r).clone())),
        _ => None,
    };
    let found = match (ax, dir) {
        (Axiom::A1, LeftToRight) => {
            let (x, yz) = sum_parts(redex)?;
            let (y, z) = sum_parts(&yz)?;
            s.with("x", x).with("y", y).with("z", z)
        }
        (Axiom::A1, RightToLeft) => {
            let (xy, z) = sum_parts(redex)?;
            let (x, y) = sum_parts(&xy)?;
            s.with("x", x).with("y", y).with("z", z)
        }
        (Axiom::A2, LeftToRight) => {
            let (x, y) = sum_parts(redex)?;
            s.with("x", x).with("y", y)
        }
        (Axiom::A2, RightToLeft) => {
            let (y, x) = sum_parts(redex)?;
            s.with("x", x).with("y", y)
        }
        (Axiom::A3, LeftToRight) => {
            let (x, z) = sum_parts(redex)?;
            if z != Term::Zero {
                return None;
            }
            s.with("x", x)
        }
        (Axiom::A4, LeftToRight) => {
            let (x, y) = sum_parts(redex)?;
            if x != y {
                return None;
            }
            s.with("x", x)
        }
        (Axiom::A3 | Axiom::A4, RightToLeft) => s.with("x", redex.clone()),
        (Axiom::T1, LeftToRight) => match redex {
            Term::Prefix(a, p) if **p == Term::Zero => s.with_action(a.clone()),
            _ => return None,
        },
        (Axiom::T1, RightToLeft) => s.with_action(action?.clone()),
        (Axiom::T2, LeftToRight) => match redex {
            Term::Prefix(a, p) => {
                let (x, y) = sum_parts(p)?;
                s.with_action(a.clone()).with("x", x).with("y", y)
            }
            _ => return None,
        },
        (Axiom::T2, RightToLeft) => {
            let (ax_, ay) = sum_parts(redex)?;
            match (ax_, ay) {
                (Term::Prefix(a, x), Term::Prefix(b, y)) if a == b => {
                    s.with_action(a).with("x", (*x).clone()).with("y", (*y).clone())
                }
                _ => return None,
            }
        }
        (Axiom::T3, LeftToRight) => match redex {
            Term::Prefix(a, p) if **p == Term::eps_one() => s.with_action(a.clone()),
            _ => return None,
        },
        (Axiom::T3, RightToLeft) => match redex {
            Term::PrefixOne(Label::Sym(a)) => s.with_action(a.clone()),
            _ => return None,
        },
        (Axiom::R1 | Axiom::R2, _) => return None,
    };
    let (l, r) = instantiate(ax, &found).ok()?;
    let from = if dir == LeftToRight { l } else { r };
    (from == *redex).then_some(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn rewrite(ax: Axiom, dir: Dir, s: &str) -> Term {
        let redex = t(s);
        let sub = match_axiom(ax, dir, &redex, Some(&Symbol::new("a"))).unwrap();
        apply_axiom(&redex, ax, &[], dir, &sub).unwrap()
    }

    #[test]
    fn budget() {
        assert_eq!(W.iter().filter(|a| !a.is_conditional()).count(), 7);
        assert_eq!(W.iter().filter(|a| a.is_conditional()).count(), 2);
        assert!(B.iter().all(|a| W.contains(a)));
    }

    #[test]
    fn prefix_laws() {
        assert_eq!(rewrite(Axiom::T1, Dir::LeftToRight, "a.0"), Term::Zero);
        assert_eq!(rewrite(Axiom::T3, Dir::LeftToRight, "a.eps.1"), t("a.1"));
        assert_eq!(rewrite(Axiom::T2, Dir::LeftToRight, "a.(b.1 + c.1)"), t("a.b.1 + a.c.1"));
        assert_eq!(rewrite(Axiom::T2, Dir::RightToLeft, "a.b.1 + a.c.1"), t("a.(b.1 + c.1)"));
        assert_eq!(rewrite(Axiom::T1, Dir::RightToLeft, "0"), t("a.0"));
    }

    #[test]
    fn choice_laws() {
        assert_eq!(rewrite(Axiom::A3, Dir::RightToLeft, "b.1"), t("b.1 + 0"));
        assert_eq!(rewrite(Axiom::A1, Dir::LeftToRight, "a.1 + (b.1 + c.1)"), t("a.1 + b.1 + c.1"));
        assert_eq!(rewrite(Axiom::A2, Dir::LeftToRight, "a.1 + b.1"), t("b.1 + a.1"));
        assert_eq!(rewrite(Axiom::A4, Dir::LeftToRight, "a.C + a.C"), t("a.C"));
    }

    #[test]
    fn constants_are_not_summands() {
        let s = Subst::new().with("x", Term::constant("C")).with("y", t("a.1"));
        assert!(matches!(instantiate(Axiom::A2, &s), Err(AxiomError::IllegalInstantiation(..))));
        assert!(matches!(instantiate(Axiom::R1, &Subst::new()), Err(AxiomError::Conditional(_))));
    }

    #[test]
    fn mismatch_and_bad_path() {
        let s = Subst::new().with_action(Symbol::new("a"));
        assert!(matches!(apply_axiom(&t("b.0"), Axiom::T1, &[], Dir::LeftToRight, &s), Err(AxiomError::NoMatch(..))));
        assert_eq!(apply_axiom(&t("a.0"), Axiom::T1, &[Sel::Left], Dir::LeftToRight, &s), Err(AxiomError::BadPath));
    }
}
