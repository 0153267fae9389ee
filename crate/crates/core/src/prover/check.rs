//! An independent checker for [`Proof`]s. Every step is validated on its own
//! from its endpoints and payload; nothing semantic is consulted.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::axiom::{instantiate, AxiomError, Dir};
use super::proof::{Proof, ProofStep, Rule, StepId};
use crate::term::{Name, ProcessEnv, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckFailure {
    #[error("the proof has no steps")]
    Empty,
    #[error("definition of `{0}` is not a closed guarded term")]
    BadDefinition(Name),
    #[error("constant `{0}` is not defined")]
    UndefinedConstant(Name),
    #[error("`{0}` is not a closed term of the calculus")]
    IllegalTerm(String),
    #[error("premise {0} does not precede the step")]
    ForwardReference(StepId),
    #[error("conclusion does not follow: {0}")]
    EndpointMismatch(String),
    #[error(transparent)]
    Axiom(#[from] AxiomError),
    #[error("summands at the path are not a rearrangement of each other")]
    NotARearrangement,
    #[error("`{0}` is not defined as the stated body")]
    DefinitionMismatch(Name),
    #[error("body `{0}` is not guarded in its variables")]
    Unguarded(String),
    #[error("`{0}` occurs in its own folding body")]
    ConstantInFoldBody(Name),
    #[error("malformed system: {0}")]
    MalformedSystem(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}: {failure}", match step { Some(s) => format!("step {s}"), None => "proof".to_string() })]
pub struct CheckError {
    pub step: Option<StepId>,
    pub failure: CheckFailure,
}

fn mismatch(what: impl Into<String>) -> CheckFailure {
    CheckFailure::EndpointMismatch(what.into())
}

fn ensure(cond: bool, f: impl FnOnce() -> CheckFailure) -> Result<(), CheckFailure> {
    if cond {
        Ok(())
    } else {
        Err(f())
    }
}

/// The flattened summands of a sum, sorted.
fn summand_multiset(t: &Term) -> Vec<&Term> {
    let mut v = t.summands();
    v.sort();
    v
}

struct Checker<'a> {
    env: &'a ProcessEnv,
    steps: &'a [ProofStep],
}

impl Checker<'_> {
    fn legal(&self, t: &Term) -> Result<(), CheckFailure> {
        ensure(t.is_closed() && t.is_process(), || CheckFailure::IllegalTerm(t.to_string()))?;
        for c in t.constants_in() {
            ensure(self.env.contains(&c), || CheckFailure::UndefinedConstant(c.clone()))?;
        }
        Ok(())
    }

    fn premise(&self, at: StepId, p: StepId) -> Result<&ProofStep, CheckFailure> {
        ensure(p < at, || CheckFailure::ForwardReference(p))?;
        Ok(&self.steps[p])
    }

    fn body(&self, c: &Name) -> Result<&Term, CheckFailure> {
        self.env.get(c).ok_or_else(|| CheckFailure::UndefinedConstant(c.clone()))
    }

    fn step(&self, i: StepId) -> Result<(), CheckFailure> {
        let s = &self.steps[i];
        self.legal(&s.lhs)?;
        self.legal(&s.rhs)?;
        match &s.rule {
            Rule::Refl => ensure(s.lhs == s.rhs, || mismatch("sides differ")),
            Rule::Sym(p) => {
                let p = self.premise(i, *p)?;
                ensure(p.lhs == s.rhs && p.rhs == s.lhs, || mismatch("not the premise reversed"))
            }
            Rule::Trans(ps) => {
                ensure(!ps.is_empty(), || mismatch("empty chain"))?;
                let chain: Vec<&ProofStep> = ps.iter().map(|p| self.premise(i, *p)).collect::<Result<_, _>>()?;
                ensure(chain[0].lhs == s.lhs, || mismatch("chain does not start at the left side"))?;
                ensure(chain[chain.len() - 1].rhs == s.rhs, || mismatch("chain does not end at the right side"))?;
                for w in chain.windows(2) {
                    ensure(w[0].rhs == w[1].lhs, || mismatch(format!("chain breaks between `{}` and `{}`", w[0].rhs, w[1].lhs)))?;
                }
                Ok(())
            }
            Rule::CongPrefix(p) => {
                let p = self.premise(i, *p)?;
                match (&s.lhs, &s.rhs) {
                    (Term::Prefix(a, l), Term::Prefix(b, r)) if a == b && **l == p.lhs && **r == p.rhs => Ok(()),
                    _ => Err(mismatch("not the premise under a common prefix")),
                }
            }
            Rule::CongChoice(pl, pr) => {
                let (pl, pr) = (self.premise(i, *pl)?, self.premise(i, *pr)?);
                match (&s.lhs, &s.rhs) {
                    (Term::Sum(l1, l2), Term::Sum(r1, r2))
                        if **l1 == pl.lhs && **r1 == pl.rhs && **l2 == pr.lhs && **r2 == pr.rhs =>
                    {
                        Ok(())
                    }
                    _ => Err(mismatch("not the premises joined by a choice")),
                }
            }
            Rule::Axiom { axiom, dir, subst, path } => {
                let (l, r) = instantiate(*axiom, subst)?;
                let (from, to) = if *dir == Dir::LeftToRight { (l, r) } else { (r, l) };
                let redex = s.lhs.at(path).ok_or(AxiomError::BadPath)?;
                ensure(*redex == from, || {
                    CheckFailure::Axiom(AxiomError::NoMatch(if *dir == Dir::LeftToRight { "left" } else { "right" }, *axiom))
                })?;
                ensure(s.lhs.replace_at(path, to).as_ref() == Some(&s.rhs), || mismatch("right side is not the rewritten left side"))
            }
            Rule::Aci { path } => {
                let (l, r) = match (s.lhs.at(path), s.rhs.at(path)) {
                    (Some(l), Some(r)) => (l, r),
                    _ => return Err(CheckFailure::Axiom(AxiomError::BadPath)),
                };
                ensure(s.lhs.replace_at(path, r.clone()).as_ref() == Some(&s.rhs), || mismatch("terms differ outside the path"))?;
                ensure(summand_multiset(l) == summand_multiset(r), || CheckFailure::NotARearrangement)
            }
            Rule::Unfold { constant, dir, path } => {
                let (folded, unfolded) = if *dir == Dir::LeftToRight { (&s.lhs, &s.rhs) } else { (&s.rhs, &s.lhs) };
                ensure(folded.at(path) == Some(&Term::Const(constant.clone())), || {
                    mismatch(format!("`{constant}` is not at the path"))
                })?;
                let body = self.body(constant)?.clone();
                ensure(folded.replace_at(path, body).as_ref() == Some(unfolded), || mismatch("other side is not the unfolding"))
            }
            Rule::Fold { constant, var, body, premise } => {
                let p = self.premise(i, *premise)?;
                ensure(body.is_guarded(), || CheckFailure::Unguarded(body.to_string()))?;
                ensure(body.free_vars().iter().all(|x| x == var), || CheckFailure::Unguarded(body.to_string()))?;
                let c = Term::Const(constant.clone());
                ensure(self.body(constant)? == &body.subst1(var, &c), || CheckFailure::DefinitionMismatch(constant.clone()))?;
                ensure(!self.env.constants_of(body).contains(constant), || CheckFailure::ConstantInFoldBody(constant.clone()))?;
                ensure(s.lhs == c, || mismatch("left side is not the folded constant"))?;
                ensure(p.lhs == s.rhs && p.rhs == body.subst1(var, &s.rhs), || mismatch("premise is not q = p{q/x}"))
            }
            Rule::USys { vars, bodies, left, right, premises, index } => {
                let n = vars.len();
                ensure(n > 0 && bodies.len() == n && left.len() == n && right.len() == n, || {
                    CheckFailure::MalformedSystem("tuples of different lengths".into())
                })?;
                ensure(premises.len() == 2 * n, || CheckFailure::MalformedSystem("expected two premises per equation".into()))?;
                ensure(*index < n, || CheckFailure::MalformedSystem("index out of range".into()))?;
                ensure(vars.iter().collect::<BTreeSet<_>>().len() == n, || CheckFailure::MalformedSystem("repeated variable".into()))?;
                let declared: BTreeSet<&Name> = vars.iter().collect();
                for b in bodies {
                    ensure(b.is_guarded() && b.free_vars().iter().all(|x| declared.contains(x)), || {
                        CheckFailure::Unguarded(b.to_string())
                    })?;
                }
                for t in left.iter().chain(right) {
                    self.legal(t)?;
                }
                for (side, tuple) in [left, right].into_iter().enumerate() {
                    let binding: BTreeMap<Name, Term> = vars.iter().cloned().zip(tuple.iter().cloned()).collect();
                    for (k, b) in bodies.iter().enumerate() {
                        let p = self.premise(i, premises[side * n + k])?;
                        ensure(p.lhs == tuple[k] && p.rhs == b.substitute(&binding), || {
                            mismatch(format!("premise {} does not solve equation {k}", premises[side * n + k]))
                        })?;
                    }
                }
                ensure(s.lhs == left[*index] && s.rhs == right[*index], || mismatch("conclusion is not the indexed pair"))
            }
        }
    }
}

/// Accepts the proof iff the definitions are well formed and every step is
/// justified; reports the first failing step otherwise.
pub fn check_proof(pr: &Proof) -> Result<(), CheckError> {
    for (c, body) in pr.env.iter() {
        if !(body.is_closed() && body.is_guarded()) {
            return Err(CheckError { step: None, failure: CheckFailure::BadDefinition(c.clone()) });
        }
        if let Some(u) = pr.env.undefined_in(body).into_iter().next() {
            return Err(CheckError { step: None, failure: CheckFailure::UndefinedConstant(u) });
        }
    }
    if pr.steps.is_empty() {
        return Err(CheckError { step: None, failure: CheckFailure::Empty });
    }
    let ck = Checker { env: &pr.env, steps: &pr.steps };
    for i in 0..pr.steps.len() {
        ck.step(i).map_err(|failure| CheckError { step: Some(i), failure })?;
    }
    Ok(())
}

/// Per-step verdicts, for reporting.
pub fn check_steps(pr: &Proof) -> Vec<Result<(), CheckFailure>> {
    let ck = Checker { env: &pr.env, steps: &pr.steps };
    (0..pr.steps.len()).map(|i| ck.step(i)).collect()
}
