//! Systems of equations `C_h ≐ Σ a.C_f(h,j) + Σ α.1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::builder::{canonical_sum, Builder};
use super::proof::StepId;
use super::ProverError;
use crate::automata::{Label, Symbol};
use crate::term::{is_normal_form, Name, Process, ProcessEnv, Term};

/// A summand of a normal-form body. Terminal summands order first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Summand {
    /// `α.1`
    Accept(Label),
    /// `a.C_k`
    Next(Symbol, usize),
}

/// The constants are ordered, the first one being the root. Each constant is
/// defined by the canonical sum of its summands (see [`EquationSystem::body_term`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationSystem {
    constants: Vec<Name>,
    bodies: Vec<BTreeSet<Summand>>,
}

impl EquationSystem {
    pub fn new(constants: Vec<Name>, bodies: Vec<BTreeSet<Summand>>) -> Result<EquationSystem, ProverError> {
        if constants.is_empty() || constants.len() != bodies.len() {
            return Err(ProverError::MalformedSystem("one body per constant, at least one constant".into()));
        }
        if constants.iter().collect::<BTreeSet<_>>().len() != constants.len() {
            return Err(ProverError::MalformedSystem("repeated constant".into()));
        }
        for b in &bodies {
            if b.iter().any(|s| matches!(s, Summand::Next(_, k) if *k >= constants.len())) {
                return Err(ProverError::MalformedSystem("summand refers outside the system".into()));
            }
        }
        Ok(EquationSystem { constants, bodies })
    }

    pub fn len(&self) -> usize {
        self.constants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constants.is_empty()
    }

    pub fn constants(&self) -> &[Name] {
        &self.constants
    }

    pub fn constant(&self, h: usize) -> &Name {
        &self.constants[h]
    }

    pub fn index_of(&self, c: &Name) -> Option<usize> {
        self.constants.iter().position(|d| d == c)
    }

    pub fn root(&self) -> &Name {
        &self.constants[0]
    }

    pub fn body(&self, h: usize) -> &BTreeSet<Summand> {
        &self.bodies[h]
    }

    pub fn summand_term(&self, s: &Summand) -> Term {
        match s {
            Summand::Accept(l) => Term::one(l.clone()),
            Summand::Next(a, k) => Term::prefix(a.clone(), Term::Const(self.constants[*k].clone())),
        }
    }

    /// The defining body of `C_h`: its summands sorted by the term order.
    pub fn body_term(&self, h: usize) -> Term {
        canonical_sum(&Term::sum_of(self.bodies[h].iter().map(|s| self.summand_term(s))))
    }

    /// `body_term(h)` with every `C_k` replaced by `vars[k]`.
    pub fn open_body(&self, h: usize, vars: &[Name]) -> Term {
        let index: BTreeMap<&Name, usize> = self.constants.iter().enumerate().map(|(i, c)| (c, i)).collect();
        fn go(t: &Term, index: &BTreeMap<&Name, usize>, vars: &[Name]) -> Term {
            match t {
                Term::Const(c) => Term::Var(vars[index[c]].clone()),
                Term::Prefix(a, p) => Term::prefix(a.clone(), go(p, index, vars)),
                Term::Sum(l, r) => Term::sum(go(l, index, vars), go(r, index, vars)),
                _ => t.clone(),
            }
        }
        go(&self.body_term(h), &index, vars)
    }

    pub fn to_env(&self) -> ProcessEnv {
        let mut env = ProcessEnv::new();
        for h in 0..self.len() {
            env.insert(self.constants[h].clone(), self.body_term(h));
        }
        env
    }

    pub fn to_process(&self) -> Process {
        Process::new(Term::Const(self.root().clone()), self.to_env()).expect("systems are closed")
    }

    pub fn terminals(&self, h: usize) -> BTreeSet<Label> {
        self.bodies[h]
            .iter()
            .filter_map(|s| match s {
                Summand::Accept(l) => Some(l.clone()),
                Summand::Next(..) => None,
            })
            .collect()
    }

    pub fn successors(&self, h: usize, a: &Symbol) -> BTreeSet<usize> {
        self.bodies[h]
            .iter()
            .filter_map(|s| match s {
                Summand::Next(b, k) if b == a => Some(*k),
                _ => None,
            })
            .collect()
    }

    pub fn alphabet(&self) -> BTreeSet<Symbol> {
        self.bodies
            .iter()
            .flatten()
            .filter_map(|s| match s {
                Summand::Next(a, _) | Summand::Accept(Label::Sym(a)) => Some(a.clone()),
                Summand::Accept(Label::Eps) => None,
            })
            .collect()
    }

    pub fn has_eps(&self, h: usize) -> bool {
        self.bodies[h].contains(&Summand::Accept(Label::Eps))
    }

    /// `C_h ⇒a 1` implies the summand `a.1`.
    pub fn is_saturated(&self) -> bool {
        (0..self.len()).all(|h| self.missing_terminals(h).is_empty())
    }

    pub(crate) fn missing_terminals(&self, h: usize) -> BTreeSet<Symbol> {
        self.bodies[h]
            .iter()
            .filter_map(|s| match s {
                Summand::Next(a, k) if self.has_eps(*k) && !self.bodies[h].contains(&Summand::Accept(Label::Sym(a.clone()))) => {
                    Some(a.clone())
                }
                _ => None,
            })
            .collect()
    }

    /// Exactly one non-terminal `a`-summand per `a ∈ alpha` in every body.
    pub fn is_semi_deterministic(&self, alpha: &BTreeSet<Symbol>) -> bool {
        self.alphabet().is_subset(alpha) && (0..self.len()).all(|h| alpha.iter().all(|a| self.successors(h, a).len() == 1))
    }

    /// No `eps.1` summand outside the root.
    pub fn is_epsilon_free(&self) -> bool {
        (1..self.len()).all(|h| !self.has_eps(h))
    }
}

impl fmt::Display for EquationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for h in 0..self.len() {
            writeln!(f, "{} := {};", self.constants[h], self.body_term(h))?;
        }
        write!(f, "main {};", self.root())
    }
}

/// Summands of a normal-form term over `index`.
fn summands_of(t: &Term, index: &BTreeMap<Name, usize>) -> BTreeSet<Summand> {
    t.summands()
        .into_iter()
        .filter_map(|s| match s {
            Term::Zero => None,
            Term::PrefixOne(l) => Some(Summand::Accept(l.clone())),
            Term::Prefix(a, p) => match &**p {
                Term::Const(c) => Some(Summand::Next(a.clone(), index[c])),
                _ => panic!("`{s}` is not a normal-form summand"),
            },
            _ => panic!("`{s}` is not a normal-form summand"),
        })
        .collect()
}

/// Reads off the system of a normal form; returns it with a proof of
/// `root = C_1`. Bodies already in canonical shape keep their constants;
/// otherwise fresh `_N{i}` constants are introduced.
pub(crate) fn equation_system_in(b: &mut Builder, p: &Process) -> Result<(EquationSystem, StepId), ProverError> {
    if !is_normal_form(p) {
        return Err(ProverError::NotNormalForm);
    }
    let mut order: Vec<Name> = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    let mut seen = BTreeSet::new();
    let push_consts = |t: &Term, order: &mut Vec<Name>, queue: &mut std::collections::VecDeque<Name>, seen: &mut BTreeSet<Name>| {
        for s in t.summands() {
            if let Term::Prefix(_, q) = s {
                if let Term::Const(c) = &**q {
                    if seen.insert(c.clone()) {
                        order.push(c.clone());
                        queue.push_back(c.clone());
                    }
                }
            }
        }
    };
    let root_is_const = matches!(p.root, Term::Const(_));
    if let Term::Const(c) = &p.root {
        seen.insert(c.clone());
        order.push(c.clone());
        queue.push_back(c.clone());
    } else {
        push_consts(&p.root, &mut order, &mut queue, &mut seen);
    }
    while let Some(c) = queue.pop_front() {
        let body = p.env.get(&c).expect("normal forms are closed").clone();
        push_consts(&body, &mut order, &mut queue, &mut seen);
    }
    // items: the terms the system's constants stand for
    let mut items: Vec<Term> = order.iter().map(|c| Term::Const(c.clone())).collect();
    if !root_is_const {
        items.insert(0, p.root.clone());
    }
    let offset = usize::from(!root_is_const);
    let index: BTreeMap<Name, usize> = order.iter().enumerate().map(|(i, c)| (c.clone(), i + offset)).collect();
    let bodies: Vec<BTreeSet<Summand>> = items
        .iter()
        .map(|t| match t {
            Term::Const(c) => summands_of(p.env.get(c).unwrap(), &index),
            _ => summands_of(t, &index),
        })
        .collect();

    if root_is_const {
        let reuse = EquationSystem::new(order.clone(), bodies.clone())?;
        if (0..reuse.len()).all(|h| p.env.get(reuse.constant(h)) == Some(&reuse.body_term(h))) {
            for h in 0..reuse.len() {
                b.define(reuse.constant(h).clone(), reuse.body_term(h));
            }
            let id = b.refl(p.root.clone());
            return Ok((reuse, id));
        }
    }

    let fam = b.fresh_family("_N");
    let names: Vec<Name> = (0..items.len()).map(|i| Name::new(&format!("{fam}{{{i}}}"))).collect();
    let es = EquationSystem::new(names, bodies)?;
    for h in 0..es.len() {
        b.define(es.constant(h).clone(), es.body_term(h));
    }
    let id = solve_by_usys(b, &es, items, |b, _, item, target| match item {
        Term::Const(c) => {
            let u = b.unfold(c);
            let body = b.rhs(u).clone();
            let e = b.sum_eq(&body, target);
            b.trans(&[u, e])
        }
        t => b.sum_eq(t, target),
    });
    Ok((es, id))
}

/// Proves `left[0] = C_1` for the system `es` (already defined in `b`), given
/// a way to prove `left[h] = body_h{left/C}` for each `h`.
pub(crate) fn solve_by_usys(
    b: &mut Builder,
    es: &EquationSystem,
    left: Vec<Term>,
    mut prove_left: impl FnMut(&mut Builder, usize, &Term, &Term) -> StepId,
) -> StepId {
    let vars: Vec<Name> = (0..es.len()).map(|i| Name::new(&format!("_X{{{i}}}"))).collect();
    let bodies: Vec<Term> = (0..es.len()).map(|h| es.open_body(h, &vars)).collect();
    let right: Vec<Term> = es.constants().iter().map(|c| Term::Const(c.clone())).collect();
    let lbind: BTreeMap<Name, Term> = vars.iter().cloned().zip(left.iter().cloned()).collect();
    let mut premises = Vec::with_capacity(2 * es.len());
    for h in 0..es.len() {
        let target = bodies[h].substitute(&lbind);
        let id = prove_left(b, h, &left[h], &target);
        debug_assert_eq!((b.lhs(id), b.rhs(id)), (&left[h], &target));
        premises.push(id);
    }
    for h in 0..es.len() {
        premises.push(b.unfold(es.constant(h)));
    }
    b.usys(vars, bodies, left, right, premises, 0)
}
