use std::collections::{BTreeMap, BTreeSet};

use super::builder::Builder;
use super::proof::StepId;
use super::system::{solve_by_usys, EquationSystem, Summand};
use crate::automata::Label;
use crate::semantics::{moves, reachable_terms, Step};
use crate::term::{is_normal_form, Name, Process, Term};

/// One fresh constant `_K{i}` per term reachable from the root, its body
/// listing the moves of that term; proves `root = _K{0}`.
pub(crate) fn normal_form_in(b: &mut Builder, p: &Process) -> (Process, StepId) {
    if is_normal_form(p) {
        let id = b.refl(p.root.clone());
        return (p.clone(), id);
    }
    let terms = reachable_terms(&p.root, &p.env);
    let index: BTreeMap<&Term, usize> = terms.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let bodies: Vec<BTreeSet<Summand>> = terms
        .iter()
        .map(|t| {
            moves(t, &p.env)
                .into_iter()
                .map(|(l, s)| match (l, s) {
                    (l, Step::Final) => Summand::Accept(l),
                    (Label::Sym(a), Step::To(u)) => Summand::Next(a, index[&u]),
                    (Label::Eps, Step::To(_)) => unreachable!("eps only precedes 1"),
                })
                .collect()
        })
        .collect();
    let fam = b.fresh_family("_K");
    let names: Vec<Name> = (0..terms.len()).map(|i| Name::new(&format!("{fam}{{{i}}}"))).collect();
    let es = EquationSystem::new(names, bodies).expect("indices come from the term list");
    for h in 0..es.len() {
        b.define(es.constant(h).clone(), es.body_term(h));
    }
    let id = solve_by_usys(b, &es, terms.clone(), |b, _, t, target| match t {
        Term::Const(c) => {
            let u = b.unfold(c);
            let body = b.rhs(u).clone();
            let e = b.sum_eq(&body, target);
            b.trans(&[u, e])
        }
        t => b.sum_eq(t, target),
    });
    (es.to_process(), id)
}
