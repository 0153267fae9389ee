//! Proof objects: a shared set of definitions and a list of steps, each
//! concluding an equation between closed terms.

use std::fmt;

use super::axiom::{Axiom, Dir, Subst};
use crate::term::{Name, Path, ProcessEnv, Term};

pub type StepId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Refl,
    Sym(StepId),
    /// A chain `t0 = t1 = ... = tn` of earlier steps.
    Trans(Vec<StepId>),
    /// From `p = q` infer `a.p = a.q`.
    CongPrefix(StepId),
    /// From `p1 = q1` and `p2 = q2` infer `p1 + p2 = q1 + q2`.
    CongChoice(StepId, StepId),
    /// An instance of one of A1–A4, T1–T3 at `path`.
    Axiom { axiom: Axiom, dir: Dir, subst: Subst, path: Path },
    /// Rearranges the summands at `path`; a derived rule of A1 and A2.
    Aci { path: Path },
    /// R1: replaces the constant at `path` by its body (or back).
    Unfold { constant: Name, dir: Dir, path: Path },
    /// R2: `constant = q` from `constant ≐ body{constant/var}` and a premise `q = body{q/var}`.
    Fold { constant: Name, var: Name, body: Term, premise: StepId },
    /// Unique solution of the guarded system `vars[i] = bodies[i]`: if both
    /// tuples are solutions (the first `n` premises for `left`, the next `n`
    /// for `right`), then `left[index] = right[index]`.
    USys { vars: Vec<Name>, bodies: Vec<Term>, left: Vec<Term>, right: Vec<Term>, premises: Vec<StepId>, index: usize },
}

impl Rule {
    pub fn kind(&self) -> &'static str {
        match self {
            Rule::Refl => "Refl",
            Rule::Sym(_) => "Sym",
            Rule::Trans(_) => "Trans",
            Rule::CongPrefix(_) => "CongPrefix",
            Rule::CongChoice(..) => "CongChoice",
            Rule::Axiom { dir: Dir::LeftToRight, .. } => "AxiomLR",
            Rule::Axiom { dir: Dir::RightToLeft, .. } => "AxiomRL",
            Rule::Aci { .. } => "ACI",
            Rule::Unfold { .. } => "Unfold",
            Rule::Fold { .. } => "Fold",
            Rule::USys { .. } => "USys",
        }
    }

    /// The member of `W` the step instantiates, if any.
    pub fn axiom(&self) -> Option<Axiom> {
        match self {
            Rule::Axiom { axiom, .. } => Some(*axiom),
            Rule::Unfold { .. } => Some(Axiom::R1),
            Rule::Fold { .. } => Some(Axiom::R2),
            _ => None,
        }
    }

    fn shifted(&self, by: StepId) -> Rule {
        let mut r = self.clone();
        match &mut r {
            Rule::Sym(p) | Rule::CongPrefix(p) | Rule::Fold { premise: p, .. } => *p += by,
            Rule::Trans(ps) | Rule::USys { premises: ps, .. } => ps.iter_mut().for_each(|p| *p += by),
            Rule::CongChoice(l, r) => {
                *l += by;
                *r += by;
            }
            Rule::Refl | Rule::Axiom { .. } | Rule::Aci { .. } | Rule::Unfold { .. } => {}
        }
        r
    }

    pub fn premises(&self) -> Vec<StepId> {
        match self {
            Rule::Sym(p) | Rule::CongPrefix(p) | Rule::Fold { premise: p, .. } => vec![*p],
            Rule::Trans(ps) | Rule::USys { premises: ps, .. } => ps.clone(),
            Rule::CongChoice(l, r) => vec![*l, *r],
            Rule::Refl | Rule::Axiom { .. } | Rule::Aci { .. } | Rule::Unfold { .. } => vec![],
        }
    }
}

/// Kinds a step may have besides the axioms.
pub const META_RULES: [&str; 7] = ["Refl", "Sym", "Trans", "CongPrefix", "CongChoice", "ACI", "USys"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofStep {
    pub lhs: Term,
    pub rhs: Term,
    pub rule: Rule,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Proof {
    pub env: ProcessEnv,
    pub steps: Vec<ProofStep>,
}

impl Proof {
    /// The conclusion of the last step.
    pub fn goal(&self) -> Option<(&Term, &Term)> {
        self.steps.last().map(|s| (&s.lhs, &s.rhs))
    }

    /// Axioms of `W` used anywhere in the proof.
    pub fn axioms_used(&self) -> std::collections::BTreeSet<Axiom> {
        self.steps.iter().filter_map(|s| s.rule.axiom()).collect()
    }

    /// From proofs of `p = q` and `q = r`, a proof of `p = r`. Fails if the
    /// goals do not meet or a constant is defined differently in the two.
    pub fn chain(mut self, next: Proof) -> Result<Proof, String> {
        let (Some((_, q1)), Some((q2, _))) = (self.goal(), next.goal()) else {
            return Err("empty proof".into());
        };
        if q1 != q2 {
            return Err(format!("goals do not meet: `{q1}` vs `{q2}`"));
        }
        for (c, body) in next.env.iter() {
            match self.env.get(c) {
                Some(b) if b != body => return Err(format!("constant `{c}` is defined differently")),
                Some(_) => {}
                None => self.env.insert(c.clone(), body.clone()),
            }
        }
        let first = self.steps.len() - 1;
        let by = self.steps.len();
        self.steps.extend(next.steps.into_iter().map(|s| ProofStep { rule: s.rule.shifted(by), ..s }));
        let last = self.steps.len() - 1;
        let (lhs, rhs) = (self.steps[first].lhs.clone(), self.steps[last].rhs.clone());
        self.steps.push(ProofStep { lhs, rhs, rule: Rule::Trans(vec![first, last]) });
        Ok(self)
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            let extra = match &s.rule {
                Rule::Axiom { axiom, .. } => format!(" {axiom}"),
                Rule::Unfold { constant, .. } | Rule::Fold { constant, .. } => format!(" {constant}"),
                _ => String::new(),
            };
            let ps = s.rule.premises();
            let ps = if ps.is_empty() {
                String::new()
            } else {
                format!(" [{}]", ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","))
            };
            writeln!(f, "{i:>4}  {} = {}    ({}{extra}{ps})", s.lhs, s.rhs, s.rule.kind())?;
        }
        Ok(())
    }
}
