use std::collections::{BTreeMap, VecDeque};

use super::builder::{canonical_sum, Builder};
use super::proof::StepId;
use super::system::{EquationSystem, Summand};
use super::ProverError;
use crate::automata::{lang_equiv, validate_gfa, Gfa, Label, RawGfa, Transition};
use crate::semantics::FINAL;
use crate::term::{Name, Term};

/// The automaton of a system, states named after its constants.
pub(crate) fn system_gfa(es: &EquationSystem, initial: usize) -> Gfa {
    let mut transitions = Vec::new();
    let mut has_final = false;
    for h in 0..es.len() {
        for s in es.body(h) {
            let (l, t) = match s {
                Summand::Accept(l) => {
                    has_final = true;
                    (l.clone(), FINAL.to_string())
                }
                Summand::Next(a, k) => (Label::Sym(a.clone()), es.constant(*k).to_string()),
            };
            transitions.push(Transition::new(es.constant(h).to_string(), l, t));
        }
    }
    validate_gfa(RawGfa {
        states: es.constants().iter().map(|c| c.to_string()).collect(),
        final_state: has_final.then(|| FINAL.to_string()),
        alphabet: es.alphabet().into_iter().collect(),
        transitions,
        initial: es.constant(initial).to_string(),
    })
    .expect("systems denote GFAs")
}

/// For two saturated, semi-deterministic, eps-free systems over the same
/// alphabet, pairs the constants with equal languages reachable from the
/// roots and proves `C_1 = C'_1` with one unique-solution step. Returns
/// `None` when the roots differ in language.
pub(crate) fn merge_in(b: &mut Builder, es1: &EquationSystem, es2: &EquationSystem) -> Result<Option<StepId>, ProverError> {
    let alpha = es1.alphabet();
    if alpha != es2.alphabet() {
        return Err(ProverError::AlphabetMismatch);
    }
    if let Some(c) = es1.constants().iter().find(|c| es2.index_of(c).is_some()) {
        return Err(ProverError::NameClash(c.clone()));
    }
    for es in [es1, es2] {
        if !es.is_saturated() {
            return Err(ProverError::PreconditionNotSaturated);
        }
        if !es.is_semi_deterministic(&alpha) {
            return Err(ProverError::NotSemiDeterministic);
        }
        if !es.is_epsilon_free() {
            return Err(ProverError::NotEpsilonFree);
        }
    }
    let equivalent = |h: usize, k: usize| lang_equiv(&system_gfa(es1, h), &system_gfa(es2, k)).holds();
    if !equivalent(0, 0) {
        return Ok(None);
    }
    let only = |es: &EquationSystem, h: usize, a| *es.successors(h, a).iter().next().expect("semi-deterministic");
    let mut pairs: Vec<(usize, usize)> = vec![(0, 0)];
    let mut pos: BTreeMap<(usize, usize), usize> = BTreeMap::from([((0, 0), 0)]);
    let mut queue = VecDeque::from([(0, 0)]);
    while let Some((h, k)) = queue.pop_front() {
        if es1.terminals(h) != es2.terminals(k) {
            return Err(ProverError::Internal(format!(
                "paired constants `{}` and `{}` differ in their terminal summands",
                es1.constant(h),
                es2.constant(k)
            )));
        }
        for a in &alpha {
            let next = (only(es1, h, a), only(es2, k, a));
            if !pos.contains_key(&next) {
                if !equivalent(next.0, next.1) {
                    return Err(ProverError::Internal(format!(
                        "successors `{}` and `{}` of an equivalent pair differ in language",
                        es1.constant(next.0),
                        es2.constant(next.1)
                    )));
                }
                pos.insert(next, pairs.len());
                pairs.push(next);
                queue.push_back(next);
            }
        }
    }

    let vars: Vec<Name> = (0..pairs.len()).map(|i| Name::new(&format!("_X{{{i}}}"))).collect();
    let bodies: Vec<Term> = pairs
        .iter()
        .map(|&(h, k)| {
            let next = alpha.iter().map(|a| Term::prefix(a.clone(), Term::Var(vars[pos[&(only(es1, h, a), only(es2, k, a))]].clone())));
            let terms = es1.terminals(h).into_iter().map(Term::one);
            canonical_sum(&Term::sum_of(next.chain(terms)))
        })
        .collect();
    let left: Vec<Term> = pairs.iter().map(|&(h, _)| Term::Const(es1.constant(h).clone())).collect();
    let right: Vec<Term> = pairs.iter().map(|&(_, k)| Term::Const(es2.constant(k).clone())).collect();
    let mut premises = Vec::new();
    for tuple in [&left, &right] {
        let binding: BTreeMap<Name, Term> = vars.iter().cloned().zip(tuple.iter().cloned()).collect();
        for (i, t) in tuple.iter().enumerate() {
            let Term::Const(c) = t else { unreachable!() };
            let u = b.unfold(c);
            let body = b.rhs(u).clone();
            let e = b.sum_eq(&body, &bodies[i].substitute(&binding));
            premises.push(b.trans(&[u, e]));
        }
    }
    Ok(Some(b.usys(vars, bodies, left, right, premises, 0)))
}
