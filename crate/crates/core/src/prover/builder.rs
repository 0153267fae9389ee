//! Incremental proof construction and the small tactics the pipeline is
//! built from.

use std::collections::{BTreeMap, BTreeSet};

use super::axiom::{apply_axiom, match_axiom, Axiom, Dir, Subst};
use super::proof::{Proof, ProofStep, Rule, StepId};
use crate::automata::Symbol;
use crate::term::{Name, ProcessEnv, Sel, Term};

pub(crate) struct Builder {
    pub env: ProcessEnv,
    steps: Vec<ProofStep>,
    families: BTreeSet<String>,
    cache: BTreeMap<(&'static str, Symbol, Name), StepId>,
}

/// Path of summand `i` in `Term::sum_of` of `n` summands.
pub(crate) fn summand_path(n: usize, i: usize) -> Vec<Sel> {
    debug_assert!(i < n);
    if n == 1 {
        return vec![];
    }
    let depth = if i == 0 { n - 1 } else { n - 1 - i };
    let mut p = vec![Sel::Left; depth];
    if i > 0 {
        p.push(Sel::Right);
    }
    p
}

/// The canonical form of a sum: flattened, without `0`, duplicates removed,
/// sorted by the term order.
pub(crate) fn canonical_sum(t: &Term) -> Term {
    let set: BTreeSet<&Term> = t.summands().into_iter().filter(|s| **s != Term::Zero).collect();
    Term::sum_of(set.into_iter().cloned())
}

impl Builder {
    pub fn new(env: ProcessEnv) -> Builder {
        Builder { env, steps: Vec::new(), families: BTreeSet::new(), cache: BTreeMap::new() }
    }

    pub fn finish(self) -> Proof {
        Proof { env: self.env, steps: self.steps }
    }

    pub fn lhs(&self, id: StepId) -> &Term {
        &self.steps[id].lhs
    }

    pub fn rhs(&self, id: StepId) -> &Term {
        &self.steps[id].rhs
    }

    fn push(&mut self, lhs: Term, rhs: Term, rule: Rule) -> StepId {
        self.steps.push(ProofStep { lhs, rhs, rule });
        self.steps.len() - 1
    }

    /// A name prefix `base`, `base1`, ... not used by any constant so far.
    pub fn fresh_family(&mut self, base: &str) -> String {
        let taken = |fam: &str, env: &ProcessEnv| {
            let open = format!("{fam}{{");
            env.iter().any(|(c, _)| c.as_str().starts_with(&open))
        };
        for n in 0.. {
            let fam = if n == 0 { base.to_string() } else { format!("{base}{n}") };
            if !self.families.contains(&fam) && !taken(&fam, &self.env) {
                self.families.insert(fam.clone());
                return fam;
            }
        }
        unreachable!()
    }

    pub fn define(&mut self, c: Name, body: Term) {
        self.env.insert(c, body);
    }

    pub fn refl(&mut self, t: Term) -> StepId {
        self.push(t.clone(), t, Rule::Refl)
    }

    pub fn sym(&mut self, id: StepId) -> StepId {
        if self.lhs(id) == self.rhs(id) {
            return id;
        }
        let (l, r) = (self.rhs(id).clone(), self.lhs(id).clone());
        self.push(l, r, Rule::Sym(id))
    }

    /// Chains the steps, dropping trivial ones.
    pub fn trans(&mut self, ids: &[StepId]) -> StepId {
        let kept: Vec<StepId> = ids.iter().copied().filter(|&i| self.lhs(i) != self.rhs(i)).collect();
        for w in ids.windows(2) {
            debug_assert_eq!(self.rhs(w[0]), self.lhs(w[1]), "broken chain");
        }
        match kept.len() {
            0 => {
                let t = self.lhs(ids[0]).clone();
                self.refl(t)
            }
            1 => kept[0],
            _ => {
                let (l, r) = (self.lhs(kept[0]).clone(), self.rhs(*kept.last().unwrap()).clone());
                self.push(l, r, Rule::Trans(kept))
            }
        }
    }

    /// From `eq: u = v` with `t.at(path) = u`, proves `t = t[path := v]`.
    pub fn cong(&mut self, t: &Term, path: &[Sel], eq: StepId) -> StepId {
        let Some((first, rest)) = path.split_first() else {
            debug_assert_eq!(t, self.lhs(eq));
            return eq;
        };
        if self.lhs(eq) == self.rhs(eq) {
            return self.refl(t.clone());
        }
        match (first, t) {
            (Sel::Body, Term::Prefix(a, p)) => {
                let inner = self.cong(p, rest, eq);
                let (l, r) = (
                    Term::prefix(a.clone(), self.lhs(inner).clone()),
                    Term::prefix(a.clone(), self.rhs(inner).clone()),
                );
                self.push(l, r, Rule::CongPrefix(inner))
            }
            (Sel::Left, Term::Sum(l, r)) => {
                let inner = self.cong(l, rest, eq);
                let keep = self.refl((**r).clone());
                let (a, b) = (
                    Term::sum(self.lhs(inner).clone(), (**r).clone()),
                    Term::sum(self.rhs(inner).clone(), (**r).clone()),
                );
                self.push(a, b, Rule::CongChoice(inner, keep))
            }
            (Sel::Right, Term::Sum(l, r)) => {
                let inner = self.cong(r, rest, eq);
                let keep = self.refl((**l).clone());
                let (a, b) = (
                    Term::sum((**l).clone(), self.lhs(inner).clone()),
                    Term::sum((**l).clone(), self.rhs(inner).clone()),
                );
                self.push(a, b, Rule::CongChoice(keep, inner))
            }
            _ => panic!("path {path:?} does not address a subterm of `{t}`"),
        }
    }

    /// Rewrites `t` at `path` with an axiom; `action` is needed only for T1 right-to-left.
    pub fn axiom(&mut self, t: &Term, path: &[Sel], axiom: Axiom, dir: Dir, action: Option<&Symbol>) -> StepId {
        let redex = t.at(path).expect("path addresses a subterm");
        let subst = match_axiom(axiom, dir, redex, action)
            .unwrap_or_else(|| panic!("{axiom} {dir:?} does not apply to `{redex}`"));
        self.axiom_with(t, path, axiom, dir, subst)
    }

    pub fn axiom_with(&mut self, t: &Term, path: &[Sel], axiom: Axiom, dir: Dir, subst: Subst) -> StepId {
        let rhs = apply_axiom(t, axiom, path, dir, &subst).expect("axiom instance applies");
        self.push(t.clone(), rhs, Rule::Axiom { axiom, dir, subst, path: path.to_vec() })
    }

    /// `t = t'` where `t'` rearranges the summands at `path` into `target`.
    pub fn aci(&mut self, t: &Term, path: &[Sel], target: Term) -> StepId {
        if t.at(path) == Some(&target) {
            return self.refl(t.clone());
        }
        let rhs = t.replace_at(path, target).expect("path addresses a subterm");
        self.push(t.clone(), rhs, Rule::Aci { path: path.to_vec() })
    }

    /// `C = body(C)`.
    pub fn unfold(&mut self, c: &Name) -> StepId {
        let body = self.env.get(c).unwrap_or_else(|| panic!("`{c}` is defined")).clone();
        self.push(Term::Const(c.clone()), body, Rule::Unfold { constant: c.clone(), dir: Dir::LeftToRight, path: vec![] })
    }

    /// `a.C = a.body(C)`.
    pub fn unfold_under(&mut self, a: &Symbol, c: &Name) -> StepId {
        let u = self.unfold(c);
        let t = Term::prefix(a.clone(), Term::Const(c.clone()));
        self.cong(&t, &[Sel::Body], u)
    }

    pub fn fold(&mut self, c: &Name, var: &Name, body: Term, premise: StepId) -> StepId {
        let q = self.lhs(premise).clone();
        self.push(Term::Const(c.clone()), q, Rule::Fold { constant: c.clone(), var: var.clone(), body, premise })
    }

    pub fn usys(&mut self, vars: Vec<Name>, bodies: Vec<Term>, left: Vec<Term>, right: Vec<Term>, premises: Vec<StepId>, index: usize) -> StepId {
        let (l, r) = (left[index].clone(), right[index].clone());
        self.push(l, r, Rule::USys { vars, bodies, left, right, premises, index })
    }

    /// `t = canonical_sum(t)` using ACI, A4 and A3.
    pub fn normalize(&mut self, t: &Term) -> StepId {
        let target = canonical_sum(t);
        if *t == target {
            return self.refl(t.clone());
        }
        let mut steps = Vec::new();
        let mut cur = t.clone();
        let mut items: Vec<Term> = cur.summands().into_iter().cloned().collect();
        loop {
            let mut counts: BTreeMap<&Term, usize> = BTreeMap::new();
            for s in &items {
                *counts.entry(s).or_default() += 1;
            }
            let Some((dup, c)) = counts.into_iter().find(|(_, c)| *c > 1) else { break };
            let dup = dup.clone();
            let mut arranged = vec![dup.clone(); c];
            arranged.extend(items.iter().filter(|s| **s != dup).cloned());
            let s = self.aci(&cur, &[], Term::sum_of(arranged.iter().cloned()));
            steps.push(s);
            cur = self.rhs(s).clone();
            for k in 0..c - 1 {
                let path = vec![Sel::Left; arranged.len() - k - 2];
                let s = self.axiom(&cur, &path, Axiom::A4, Dir::LeftToRight, None);
                steps.push(s);
                cur = self.rhs(s).clone();
            }
            items = cur.summands().into_iter().cloned().collect();
        }
        if items.len() > 1 && items.contains(&Term::Zero) {
            let mut arranged: Vec<Term> = items.iter().filter(|s| **s != Term::Zero).cloned().collect();
            arranged.push(Term::Zero);
            let s = self.aci(&cur, &[], Term::sum_of(arranged));
            steps.push(s);
            cur = self.rhs(s).clone();
            let s = self.axiom(&cur, &[], Axiom::A3, Dir::LeftToRight, None);
            steps.push(s);
            cur = self.rhs(s).clone();
        }
        let s = self.aci(&cur, &[], target);
        steps.push(s);
        self.trans(&steps)
    }

    /// `s = t` for sums with the same set of non-`0` summands.
    pub fn sum_eq(&mut self, s: &Term, t: &Term) -> StepId {
        let a = self.normalize(s);
        let b = self.normalize(t);
        assert_eq!(self.rhs(a), self.rhs(b), "`{s}` and `{t}` have different summands");
        let b = self.sym(b);
        self.trans(&[a, b])
    }

    /// `t = 0` for a term built from `0`, prefixes and sums only.
    pub fn zero_out(&mut self, t: &Term) -> StepId {
        match t {
            Term::Zero => self.refl(Term::Zero),
            Term::Prefix(a, p) => {
                let z = Term::prefix(a.clone(), Term::Zero);
                let k = self.axiom(&z, &[], Axiom::T1, Dir::LeftToRight, None);
                if **p == Term::Zero {
                    return k;
                }
                let inner = self.zero_out(p);
                let c = self.cong(t, &[Sel::Body], inner);
                self.trans(&[c, k])
            }
            Term::Sum(l, r) => {
                let mut chain = Vec::new();
                let mut cur = t.clone();
                for (side, part) in [(Sel::Left, l), (Sel::Right, r)] {
                    if **part != Term::Zero {
                        let z = self.zero_out(part);
                        let c = self.cong(&cur, &[side], z);
                        cur = self.rhs(c).clone();
                        chain.push(c);
                    }
                }
                chain.push(self.axiom(&cur, &[], Axiom::A3, Dir::LeftToRight, None));
                self.trans(&chain)
            }
            _ => panic!("`{t}` is not a dead term"),
        }
    }

    /// Lemmas about `a.C` are proved once per builder.
    pub fn cached(&self, lemma: &'static str, a: &Symbol, c: &Name) -> Option<StepId> {
        self.cache.get(&(lemma, a.clone(), c.clone())).copied()
    }

    pub fn remember(&mut self, lemma: &'static str, a: &Symbol, c: &Name, id: StepId) {
        self.cache.insert((lemma, a.clone(), c.clone()), id);
    }

    /// Makes `id` the last step, so that it is the goal of the finished proof.
    pub fn conclude(&mut self, id: StepId) {
        if id + 1 != self.steps.len() {
            let (l, r) = (self.lhs(id).clone(), self.rhs(id).clone());
            self.push(l, r, Rule::Trans(vec![id]));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::check_proof;
    use crate::term::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn paths_into_left_nested_sums() {
        let s = Term::sum_of([t("a.1"), t("b.1"), t("c.1")]);
        for (i, want) in ["a.1", "b.1", "c.1"].iter().enumerate() {
            assert_eq!(s.at(&summand_path(3, i)), Some(&t(want)));
        }
        assert_eq!(summand_path(1, 0), vec![]);
    }

    #[test]
    fn normalization_is_checkable() {
        for s in ["b.1 + (a.1 + b.1) + 0", "0 + 0", "a.1 + a.1 + a.1", "c.1 + b.1 + a.1 + b.1 + c.1 + 0"] {
            let mut b = Builder::new(ProcessEnv::new());
            let id = b.normalize(&t(s));
            assert_eq!(b.rhs(id), &canonical_sum(&t(s)));
            let pr = b.finish();
            check_proof(&pr).unwrap();
        }
    }

    #[test]
    fn dead_terms_are_zero() {
        let mut b = Builder::new(ProcessEnv::new());
        let id = b.zero_out(&t("a.(b.0 + 0) + c.0"));
        assert_eq!(b.rhs(id), &Term::Zero);
        check_proof(&b.finish()).unwrap();
    }
}
