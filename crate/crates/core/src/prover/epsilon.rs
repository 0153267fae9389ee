use std::collections::BTreeSet;

use super::axiom::{Axiom, Dir};
use super::builder::{canonical_sum, summand_path, Builder};
use super::proof::StepId;
use super::saturate::eps_prefix;
use super::system::{solve_by_usys, EquationSystem, Summand};
use super::ProverError;
use crate::automata::Label;
use crate::term::{Name, Term};

/// Removes `eps.1` from every non-root body of a saturated system; proves
/// `C_1 = _E{0}`.
///
/// When the root has `eps.1` and is the target of some summand, those
/// summands are redirected to an extra copy of the root without `eps.1`, so
/// that the root of the output is never re-entered.
pub(crate) fn strip_epsilon_in(b: &mut Builder, es: &EquationSystem) -> Result<(EquationSystem, StepId), ProverError> {
    if !es.is_saturated() {
        return Err(ProverError::PreconditionNotSaturated);
    }
    let n = es.len();
    let reentered = (0..n).any(|h| es.body(h).iter().any(|s| matches!(s, Summand::Next(_, 0))));
    let copy = es.has_eps(0) && reentered;
    if es.is_epsilon_free() && !copy {
        let id = b.refl(Term::Const(es.root().clone()));
        return Ok((es.clone(), id));
    }
    // `removed(k)`: a.C_k is rewritten through `C_k = rest + eps.1`
    let removed = |k: usize| es.has_eps(k) && (k != 0 || copy);
    let redirect = |k: usize| if k == 0 && copy { n } else { k };
    let eps = Summand::Accept(Label::Eps);
    let strip_body = |h: usize, keep_eps: bool| -> BTreeSet<Summand> {
        es.body(h)
            .iter()
            .filter(|s| keep_eps || **s != eps)
            .map(|s| match s {
                Summand::Next(a, k) => Summand::Next(a.clone(), redirect(*k)),
                other => other.clone(),
            })
            .collect()
    };
    let mut bodies: Vec<BTreeSet<Summand>> = (0..n).map(|h| strip_body(h, h == 0)).collect();
    let without_eps = |h: usize| canonical_sum(&Term::sum_of(es.body_term(h).summands().into_iter().filter(|s| **s != Term::eps_one()).cloned()));
    let mut left: Vec<Term> = (0..n).map(|h| if h == 0 { es.body_term(0) } else { without_eps(h) }).collect();
    if copy {
        bodies.push(strip_body(0, false));
        left.push(without_eps(0));
    }
    let fam = b.fresh_family("_E");
    let names: Vec<Name> = (0..bodies.len()).map(|i| Name::new(&format!("{fam}{{{i}}}"))).collect();
    let out = EquationSystem::new(names, bodies)?;
    for h in 0..out.len() {
        b.define(out.constant(h).clone(), out.body_term(h));
    }

    let id = solve_by_usys(b, &out, left, |b, _, t, target| {
        let items: Vec<Term> = t.summands().into_iter().cloned().collect();
        let mut cur = t.clone();
        let mut lhs_steps = Vec::new();
        for (i, s) in items.iter().enumerate() {
            let Term::Prefix(a, inner) = s else { continue };
            let Term::Const(c) = &**inner else { continue };
            let k = es.index_of(c).expect("summands refer into the system");
            let eq = if removed(k) {
                eps_prefix(b, es, a, k)
            } else {
                let u = b.unfold_under(a, c);
                if es.body(k).is_empty() {
                    let t1 = b.axiom(&Term::prefix(a.clone(), Term::Zero), &[], Axiom::T1, Dir::LeftToRight, None);
                    b.trans(&[u, t1])
                } else {
                    u
                }
            };
            let st = b.cong(&cur, &summand_path(items.len(), i), eq);
            cur = b.rhs(st).clone();
            lhs_steps.push(st);
        }
        let titems: Vec<Term> = target.summands().into_iter().cloned().collect();
        let mut tcur = target.clone();
        let mut rhs_steps = Vec::new();
        for (i, s) in titems.iter().enumerate() {
            if let Term::Prefix(_, inner) = s {
                if **inner == Term::Zero {
                    let st = b.axiom(&tcur, &summand_path(titems.len(), i), Axiom::T1, Dir::LeftToRight, None);
                    tcur = b.rhs(st).clone();
                    rhs_steps.push(st);
                }
            }
        }
        let l = if lhs_steps.is_empty() { b.refl(t.clone()) } else { b.trans(&lhs_steps) };
        let r = if rhs_steps.is_empty() { b.refl(target.clone()) } else { b.trans(&rhs_steps) };
        let mid = b.sum_eq(&cur, &tcur);
        let r = b.sym(r);
        b.trans(&[l, mid, r])
    });
    // C_1 = body(C_1), which is the first component of the solution
    let u = b.unfold(es.root());
    let id = b.trans(&[u, id]);
    Ok((out, id))
}
