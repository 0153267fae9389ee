//! Equational proofs in `W`: the axioms, proof objects and their checker,
//! and the pipeline that turns two language-equivalent processes into a
//! proof of their equality.
//!
//! The pipeline runs, on each side, normal form, system of equations,
//! saturation, semi-determinization over the joint alphabet and removal of
//! `eps.1` summands; the two resulting systems are then merged by pairing
//! constants with equal languages.

mod axiom;
mod builder;
mod check;
mod determinize;
mod epsilon;
mod merge;
mod normal_form;
mod proof;
mod saturate;
mod system;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::automata::{lang_equiv, Equivalence, Symbol, Word};
use crate::semantics::{reachable_gfa, SemanticsError};
use crate::term::{Name, Process, ProcessEnv, Term};

pub use axiom::{apply_axiom, instantiate, match_axiom, Axiom, AxiomError, Dir, Subst, B, W};
pub use check::{check_proof, check_steps, CheckError, CheckFailure};
pub use proof::{Proof, ProofStep, Rule, StepId, META_RULES};
pub use system::{EquationSystem, Summand};

use builder::Builder;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProverError {
    #[error("malformed system of equations: {0}")]
    MalformedSystem(String),
    #[error("process is not in normal form")]
    NotNormalForm,
    #[error("alphabet lacks symbols used by the system: {0:?}")]
    AlphabetTooSmall(Vec<Symbol>),
    #[error("system is not saturated")]
    PreconditionNotSaturated,
    #[error("system is not semi-deterministic")]
    NotSemiDeterministic,
    #[error("system has eps.1 summands outside its root")]
    NotEpsilonFree,
    #[error("systems are over different alphabets")]
    AlphabetMismatch,
    #[error("constant `{0}` occurs in both systems")]
    NameClash(Name),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("internal error: {0}")]
    Internal(String),
}

fn finish(mut b: Builder, id: StepId) -> Proof {
    b.conclude(id);
    b.finish()
}

/// A normal form of `p` and a proof of `p = nf`, using only axioms of `B`.
pub fn to_normal_form(p: &Process) -> (Process, Proof) {
    let mut b = Builder::new(p.env.clone());
    let (nf, id) = normal_form::normal_form_in(&mut b, p);
    (nf, finish(b, id))
}

/// The system of a normal form, with a proof of `root = C_1`.
pub fn to_equation_system(p: &Process) -> Result<(EquationSystem, Proof), ProverError> {
    let mut b = Builder::new(p.env.clone());
    let (es, id) = system::equation_system_in(&mut b, p)?;
    Ok((es, finish(b, id)))
}

pub fn saturate_system(es: &EquationSystem) -> (EquationSystem, Proof) {
    let mut b = Builder::new(es.to_env());
    let (out, id) = saturate::saturate_in(&mut b, es);
    (out, finish(b, id))
}

pub fn semi_determinize_system(es: &EquationSystem, alpha: &BTreeSet<Symbol>) -> Result<(EquationSystem, Proof), ProverError> {
    let mut b = Builder::new(es.to_env());
    let (out, id) = determinize::semi_determinize_in(&mut b, es, alpha)?;
    Ok((out, finish(b, id)))
}

pub fn strip_epsilon_system(es: &EquationSystem) -> Result<(EquationSystem, Proof), ProverError> {
    let mut b = Builder::new(es.to_env());
    let (out, id) = epsilon::strip_epsilon_in(&mut b, es)?;
    Ok((out, finish(b, id)))
}

/// A proof of `C_1 = C'_1`, or `None` if the roots differ in language.
pub fn merge_equivalent_systems(es1: &EquationSystem, es2: &EquationSystem) -> Result<Option<Proof>, ProverError> {
    let mut env = es1.to_env();
    for (c, body) in es2.to_env().iter() {
        if env.contains(c) {
            return Err(ProverError::NameClash(c.clone()));
        }
        env.define(c.clone(), body.clone()).expect("system bodies are guarded and closed");
    }
    let mut b = Builder::new(env);
    Ok(merge::merge_in(&mut b, es1, es2)?.map(|id| finish(b, id)))
}

/// The systems and proofs of each stage, for inspection.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub normal_form: Process,
    pub system: EquationSystem,
    pub saturated: EquationSystem,
    pub semi_deterministic: EquationSystem,
    pub epsilon_free: EquationSystem,
}

fn pipeline_in(b: &mut Builder, p: &Process, alpha: &BTreeSet<Symbol>) -> Result<(Pipeline, StepId), ProverError> {
    let (nf, s1) = normal_form::normal_form_in(b, p);
    let (es, s2) = system::equation_system_in(b, &nf)?;
    let (sat, s3) = saturate::saturate_in(b, &es);
    let (det, s4) = determinize::semi_determinize_in(b, &sat, alpha)?;
    let (free, s5) = epsilon::strip_epsilon_in(b, &det)?;
    let id = b.trans(&[s1, s2, s3, s4, s5]);
    Ok((Pipeline { normal_form: nf, system: es, saturated: sat, semi_deterministic: det, epsilon_free: free }, id))
}

/// Runs the pipeline on one process, proving `root = root of the final system`.
pub fn reduce_to_system(p: &Process, alpha: &BTreeSet<Symbol>) -> Result<(Pipeline, Proof), ProverError> {
    let mut b = Builder::new(p.env.clone());
    let (pl, id) = pipeline_in(&mut b, p, alpha)?;
    Ok((pl, finish(b, id)))
}

#[derive(Clone, Debug)]
pub enum Outcome {
    /// A proof whose goal is `p = q` (with `q`'s constants renamed if they clash).
    Proved(Proof),
    /// A shortest word accepted by exactly one side.
    Refuted(Word),
}

/// Gives `q` constant names that do not clash with differently defined ones of `p`.
fn join_envs(p: &Process, q: &Process) -> (ProcessEnv, Term) {
    let pe = p.env.restricted_to([&p.root]);
    let qe = q.env.restricted_to([&q.root]);
    let consistent = qe.iter().all(|(c, body)| pe.get(c).is_none_or(|pb| pb == body));
    let mut env = pe.clone();
    if consistent {
        for (c, body) in qe.iter() {
            env.insert(c.clone(), body.clone());
        }
        return (env, q.root.clone());
    }
    let names: BTreeMap<Name, Name> = qe
        .iter()
        .enumerate()
        .map(|(i, (c, _))| (c.clone(), Name::new(&format!("_Q{{{i}}}"))))
        .collect();
    let rename = |t: &Term| rename_consts(t, &names);
    for (c, body) in qe.iter() {
        env.insert(names[c].clone(), rename(body));
    }
    (env, rename(&q.root))
}

fn rename_consts(t: &Term, names: &BTreeMap<Name, Name>) -> Term {
    match t {
        Term::Const(c) => Term::Const(names.get(c).cloned().unwrap_or_else(|| c.clone())),
        Term::Prefix(a, p) => Term::prefix(a.clone(), rename_consts(p, names)),
        Term::Sum(l, r) => Term::sum(rename_consts(l, names), rename_consts(r, names)),
        _ => t.clone(),
    }
}

/// `C = 0` by folding, for a constant whose body mentions no other constant
/// and whose language is empty.
fn fold_to_zero(b: &mut Builder, c: &Name) -> Option<StepId> {
    let body = b.env.get(c)?.clone();
    if body.constants_in().iter().any(|d| d != c) {
        return None;
    }
    let x = Name::new("_X{0}");
    let open = rename_to_var(&body, c, &x);
    let closed = open.subst1(&x, &Term::Zero);
    if has_one(&closed) {
        return None;
    }
    let z = b.zero_out(&closed);
    let premise = b.sym(z);
    Some(b.fold(c, &x, open, premise))
}

fn has_one(t: &Term) -> bool {
    match t {
        Term::PrefixOne(_) => true,
        Term::Prefix(_, p) => has_one(p),
        Term::Sum(l, r) => has_one(l) || has_one(r),
        _ => false,
    }
}

fn rename_to_var(t: &Term, c: &Name, x: &Name) -> Term {
    match t {
        Term::Const(d) if d == c => Term::Var(x.clone()),
        Term::Prefix(a, p) => Term::prefix(a.clone(), rename_to_var(p, c, x)),
        Term::Sum(l, r) => Term::sum(rename_to_var(l, c, x), rename_to_var(r, c, x)),
        _ => t.clone(),
    }
}

/// Decides `L(p) = L(q)`; on equality returns a proof of `p = q` in `W`.
pub fn prove_equiv(p: &Process, q: &Process) -> Result<Outcome, ProverError> {
    let gp = reachable_gfa(&p.root, &p.env)?;
    let gq = reachable_gfa(&q.root, &q.env)?;
    if let Equivalence::Inequivalent(w) = lang_equiv(&gp, &gq) {
        return Ok(Outcome::Refuted(w));
    }
    let (env, q_root) = join_envs(p, q);
    let q = Process { root: q_root, env: env.clone() };
    let p = Process { root: p.root.clone(), env: env.clone() };
    let mut b = Builder::new(env);
    if p.root == q.root {
        let id = b.refl(p.root.clone());
        return Ok(Outcome::Proved(finish(b, id)));
    }
    // the folding derivation of `C = 0` for empty self-recursive constants
    match (&p.root, &q.root) {
        (Term::Const(c), Term::Zero) => {
            if let Some(id) = fold_to_zero(&mut b, c) {
                return Ok(Outcome::Proved(finish(b, id)));
            }
        }
        (Term::Zero, Term::Const(c)) => {
            if let Some(id) = fold_to_zero(&mut b, c) {
                let id = b.sym(id);
                return Ok(Outcome::Proved(finish(b, id)));
            }
        }
        _ => {}
    }
    let alpha: BTreeSet<Symbol> = p.alphabet().union(&q.alphabet()).cloned().collect();
    let (pp, sp) = pipeline_in(&mut b, &p, &alpha)?;
    let (pq, sq) = pipeline_in(&mut b, &q, &alpha)?;
    let m = merge::merge_in(&mut b, &pp.epsilon_free, &pq.epsilon_free)?
        .ok_or_else(|| ProverError::Internal("the oracle and the merge disagree".into()))?;
    let back = b.sym(sq);
    let id = b.trans(&[sp, m, back]);
    Ok(Outcome::Proved(finish(b, id)))
}

#[cfg(test)]
mod tests;
