use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::axiom::{Axiom, Dir};
use super::builder::{summand_path, Builder};
use super::proof::StepId;
use super::system::{solve_by_usys, EquationSystem, Summand};
use super::ProverError;
use crate::automata::Symbol;
use crate::term::{Name, Sel, Term};

type Index = BTreeSet<usize>;

fn set_name(fam: &str, set: &Index) -> Name {
    let ids: Vec<String> = set.iter().map(|i| (i + 1).to_string()).collect();
    Name::new(&format!("{fam}{{{}}}", ids.join(",")))
}

/// `a.(t1 + ... + tn) = a.t1 + ... + a.tn` for the left-nested sum of `items`.
fn distribute(b: &mut Builder, a: &Symbol, items: &[Term]) -> StepId {
    let n = items.len();
    if n == 1 {
        return b.refl(Term::prefix(a.clone(), items[0].clone()));
    }
    let t = Term::prefix(a.clone(), Term::sum_of(items.iter().cloned()));
    let split = b.axiom(&t, &[], Axiom::T2, Dir::LeftToRight, None);
    let cur = b.rhs(split).clone();
    let inner = distribute(b, a, &items[..n - 1]);
    let rest = b.cong(&cur, &[Sel::Left], inner);
    b.trans(&[split, rest])
}

/// Subset construction on the system: `_B{I} ≐ Σ_{i∈I} body(C_i)` for the
/// index sets reachable from `{1}` plus the empty one, and the
/// semi-deterministic `_D{I}`; proves `C_1 = _D{1}`.
pub(crate) fn semi_determinize_in(
    b: &mut Builder,
    es: &EquationSystem,
    alpha: &BTreeSet<Symbol>,
) -> Result<(EquationSystem, StepId), ProverError> {
    let missing: BTreeSet<Symbol> = es.alphabet().difference(alpha).cloned().collect();
    if !missing.is_empty() {
        return Err(ProverError::AlphabetTooSmall(missing.into_iter().collect()));
    }
    let succ = |set: &Index, a: &Symbol| -> Index { set.iter().flat_map(|&i| es.successors(i, a)).collect() };
    let mut order: Vec<Index> = vec![BTreeSet::from([0])];
    let mut pos: BTreeMap<Index, usize> = BTreeMap::from([(order[0].clone(), 0)]);
    let mut queue = VecDeque::from([order[0].clone()]);
    while let Some(set) = queue.pop_front() {
        for a in alpha {
            let next = succ(&set, a);
            if !pos.contains_key(&next) {
                pos.insert(next.clone(), order.len());
                order.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    if !pos.contains_key(&Index::new()) {
        pos.insert(Index::new(), order.len());
        order.push(Index::new());
    }

    let fam_b = b.fresh_family("_B");
    let fam_d = b.fresh_family("_D");
    let b_names: Vec<Name> = order.iter().map(|s| set_name(&fam_b, s)).collect();
    let d_names: Vec<Name> = order.iter().map(|s| set_name(&fam_d, s)).collect();
    for (set, name) in order.iter().zip(&b_names) {
        b.define(name.clone(), Term::sum_of(set.iter().map(|&i| es.body_term(i))));
    }
    let bodies: Vec<BTreeSet<Summand>> = order
        .iter()
        .map(|set| {
            let mut body: BTreeSet<Summand> = alpha.iter().map(|a| Summand::Next(a.clone(), pos[&succ(set, a)])).collect();
            body.extend(set.iter().flat_map(|&i| es.terminals(i)).map(Summand::Accept));
            body
        })
        .collect();
    let out = EquationSystem::new(d_names, bodies)?;
    for h in 0..out.len() {
        b.define(out.constant(h).clone(), out.body_term(h));
    }
    let set_of: BTreeMap<&Name, &Index> = b_names.iter().zip(&order).collect();
    let left: Vec<Term> = b_names.iter().map(|c| Term::Const(c.clone())).collect();

    let id = solve_by_usys(b, &out, left, |b, _, bi, target| {
        let Term::Const(bname) = bi else { unreachable!() };
        let u = b.unfold(bname);
        let flat = b.rhs(u).clone();
        // rewrite every a.B_J of the target into Σ_{j∈J} a.C_j, or 0
        let items: Vec<Term> = target.summands().into_iter().cloned().collect();
        let mut cur = target.clone();
        let mut rw = Vec::new();
        for (i, s) in items.iter().enumerate() {
            let Term::Prefix(a, inner) = s else { continue };
            let Term::Const(bj) = &**inner else { continue };
            let set = set_of[bj];
            let unfold = b.unfold_under(a, bj);
            let eq = if set.is_empty() {
                let t1 = b.axiom(&Term::prefix(a.clone(), Term::Zero), &[], Axiom::T1, Dir::LeftToRight, None);
                b.trans(&[unfold, t1])
            } else {
                let parts: Vec<Term> = set.iter().map(|&j| es.body_term(j)).collect();
                let dist = distribute(b, a, &parts);
                let mut chain = vec![unfold, dist];
                let mut acc = b.rhs(dist).clone();
                for (idx, &j) in set.iter().enumerate() {
                    let back = b.unfold_under(a, es.constant(j));
                    let back = b.sym(back);
                    let s = b.cong(&acc, &summand_path(set.len(), idx), back);
                    acc = b.rhs(s).clone();
                    chain.push(s);
                }
                b.trans(&chain)
            };
            let s = b.cong(&cur, &summand_path(items.len(), i), eq);
            cur = b.rhs(s).clone();
            rw.push(s);
        }
        let rhs_chain = if rw.is_empty() { b.refl(target.clone()) } else { b.trans(&rw) };
        let mid = b.sum_eq(&flat, &cur);
        let back = b.sym(rhs_chain);
        b.trans(&[u, mid, back])
    });
    // C_1 = body(C_1) = _B{1}
    let u1 = b.unfold(es.root());
    let ub = b.unfold(&b_names[0]);
    let ub = b.sym(ub);
    let id = b.trans(&[u1, ub, id]);
    Ok((out, id))
}
