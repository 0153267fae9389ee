use std::collections::BTreeSet;

use super::axiom::{Axiom, Dir};
use super::builder::{summand_path, Builder};
use super::proof::StepId;
use super::system::{solve_by_usys, EquationSystem, Summand};
use crate::automata::{Label, Symbol};
use crate::term::{Name, Sel, Term};

/// For `C_k ≐ rest + eps.1`: `a.C_k = a.rest + a.1`, or `a.C_k = a.1` when
/// `eps.1` is the only summand.
pub(crate) fn eps_prefix(b: &mut Builder, es: &EquationSystem, a: &Symbol, k: usize) -> StepId {
    let c = es.constant(k).clone();
    if let Some(id) = b.cached("eps", a, &c) {
        return id;
    }
    let body = es.body_term(k);
    let e1 = b.unfold_under(a, &c);
    let eps = Term::eps_one();
    let rest: Vec<Term> = body.summands().into_iter().filter(|s| **s != eps).cloned().collect();
    let id = if rest.is_empty() {
        let t3 = b.axiom(&Term::prefix(a.clone(), eps), &[], Axiom::T3, Dir::LeftToRight, None);
        b.trans(&[e1, t3])
    } else {
        let split = b.sum_eq(&body, &Term::sum(Term::sum_of(rest), eps));
        let pb = Term::prefix(a.clone(), body);
        let e2 = b.cong(&pb, &[Sel::Body], split);
        let cur = b.rhs(e2).clone();
        let e3 = b.axiom(&cur, &[], Axiom::T2, Dir::LeftToRight, None);
        let cur = b.rhs(e3).clone();
        let e4 = b.axiom(&cur, &[Sel::Right], Axiom::T3, Dir::LeftToRight, None);
        b.trans(&[e1, e2, e3, e4])
    };
    b.remember("eps", a, &c, id);
    id
}

/// `a.C_k = a.C_k + a.1` for `C_k` with an `eps.1` summand.
fn saturation_lemma(b: &mut Builder, es: &EquationSystem, a: &Symbol, k: usize) -> StepId {
    let c = es.constant(k).clone();
    if let Some(id) = b.cached("sat", a, &c) {
        return id;
    }
    let e = eps_prefix(b, es, a, k);
    let big_e = b.rhs(e).clone();
    let a1 = Term::one(Label::Sym(a.clone()));
    let t = Term::sum(Term::prefix(a.clone(), Term::Const(c.clone())), a1.clone());
    let f1 = b.cong(&t, &[Sel::Left], e);
    let f2 = b.sum_eq(&Term::sum(big_e.clone(), a1), &big_e);
    let back = b.sym(e);
    let rev = b.trans(&[f1, f2, back]);
    let id = b.sym(rev);
    b.remember("sat", a, &c, id);
    id
}

/// Adds `a.1` to every body that reaches `1` by `a` through an `eps.1`
/// summand; proves `C_1 = _S{0}`.
pub(crate) fn saturate_in(b: &mut Builder, es: &EquationSystem) -> (EquationSystem, StepId) {
    if es.is_saturated() {
        let id = b.refl(Term::Const(es.root().clone()));
        return (es.clone(), id);
    }
    let fam = b.fresh_family("_S");
    let names: Vec<Name> = (0..es.len()).map(|i| Name::new(&format!("{fam}{{{i}}}"))).collect();
    let bodies: Vec<BTreeSet<Summand>> = (0..es.len())
        .map(|h| {
            let mut body = es.body(h).clone();
            body.extend(es.missing_terminals(h).into_iter().map(|a| Summand::Accept(Label::Sym(a))));
            body
        })
        .collect();
    let out = EquationSystem::new(names, bodies).expect("same shape as the input");
    for h in 0..out.len() {
        b.define(out.constant(h).clone(), out.body_term(h));
    }
    let left: Vec<Term> = es.constants().iter().map(|c| Term::Const(c.clone())).collect();
    let id = solve_by_usys(b, &out, left, |b, h, _, target| {
        let u = b.unfold(es.constant(h));
        let body = es.body_term(h);
        let items: Vec<Term> = body.summands().into_iter().cloned().collect();
        let mut steps = vec![u];
        let mut cur = body;
        for a in es.missing_terminals(h) {
            let k = es
                .body(h)
                .iter()
                .find_map(|s| match s {
                    Summand::Next(x, k) if *x == a && es.has_eps(*k) => Some(*k),
                    _ => None,
                })
                .expect("a missing terminal has a witness");
            let witness = es.summand_term(&Summand::Next(a.clone(), k));
            let i = items.iter().position(|t| *t == witness).expect("witness is a summand");
            let lemma = saturation_lemma(b, es, &a, k);
            let s = b.cong(&cur, &summand_path(items.len(), i), lemma);
            cur = b.rhs(s).clone();
            steps.push(s);
        }
        steps.push(b.sum_eq(&cur, target));
        b.trans(&steps)
    });
    (out, id)
}
