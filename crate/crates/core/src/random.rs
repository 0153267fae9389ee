//! Seeded generators of automata, processes and equivalent variants, used by
//! the property suites and the examples.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::automata::{determinize, reduce, saturate, strip_epsilon, validate_gfa, Gfa, Label, RawGfa, Symbol, Transition};
use crate::semantics::{denote, gfa_to_term};
use crate::term::{Name, Process, ProcessEnv, Term};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The first `k` letters of `a, b, c, ...`.
pub fn alphabet(k: usize) -> Vec<Symbol> {
    (b'a'..=b'z').take(k).map(|c| Symbol::new(&(c as char).to_string())).collect()
}

/// A GFA with `1..=max_states` non-final states `q0, q1, ...` over `alphabet(k)`.
/// Not necessarily reduced.
pub fn random_gfa(rng: &mut impl Rng, max_states: usize, k: usize) -> Gfa {
    let n = rng.gen_range(1..=max_states.max(1));
    let syms = alphabet(k);
    let density = rng.gen_range(0.15..0.5);
    let states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let mut transitions = Vec::new();
    for p in &states {
        for a in &syms {
            for q in &states {
                if rng.gen_bool(density / n as f64 * 2.0_f64.min(n as f64)) {
                    transitions.push(Transition::new(p.clone(), Label::Sym(a.clone()), q.clone()));
                }
            }
            if rng.gen_bool(0.25) {
                transitions.push(Transition::new(p.clone(), Label::Sym(a.clone()), "1"));
            }
        }
        if rng.gen_bool(0.25) {
            transitions.push(Transition::new(p.clone(), Label::Eps, "1"));
        }
    }
    let has_final = transitions.iter().any(|t| t.target == "1");
    validate_gfa(RawGfa {
        states,
        final_state: has_final.then(|| "1".to_string()),
        alphabet: syms,
        transitions,
        initial: "q0".into(),
    })
    .expect("generated automata respect the GFA constraints")
}

pub fn random_reduced_gfa(rng: &mut impl Rng, max_states: usize, k: usize) -> Gfa {
    reduce(&random_gfa(rng, max_states, k))
}

/// A saturated, eps-free and semi-deterministic GFA over `alphabet(k)`.
pub fn random_dgfa(rng: &mut impl Rng, max_states: usize, k: usize) -> Gfa {
    let n = rng.gen_range(1..=max_states.max(1));
    let syms = alphabet(k);
    let states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let mut transitions = Vec::new();
    for p in &states {
        for a in &syms {
            let q = states.choose(rng).expect("at least one state");
            transitions.push(Transition::new(p.clone(), Label::Sym(a.clone()), q.clone()));
            if rng.gen_bool(0.3) {
                transitions.push(Transition::new(p.clone(), Label::Sym(a.clone()), "1"));
            }
        }
    }
    if rng.gen_bool(0.3) {
        transitions.push(Transition::new("q0", Label::Eps, "1"));
    }
    let has_final = transitions.iter().any(|t| t.target == "1");
    let g = validate_gfa(RawGfa {
        states,
        final_state: has_final.then(|| "1".to_string()),
        alphabet: syms,
        transitions,
        initial: "q0".into(),
    })
    .expect("generated automata respect the GFA constraints");
    saturate(&g)
}

/// A copy of `g` in which one non-final state is split into two copies with
/// the same outgoing edges, the incoming edges shared out at random. The copy
/// of an initial state keeps its `eps` edge, so the result of splitting an
/// eps-free automaton may need [`strip_epsilon`].
pub fn split_state(rng: &mut impl Rng, g: &Gfa) -> Gfa {
    let states: Vec<&String> = g.states().iter().collect();
    let q = (*states.choose(rng).expect("a GFA has an initial state")).clone();
    let copy = format!("{q}'");
    let mut raw = g.to_raw();
    let mut transitions = Vec::new();
    for t in &raw.transitions {
        let mut t = t.clone();
        if t.target == q && rng.gen_bool(0.5) {
            t.target = copy.clone();
        }
        transitions.push(t.clone());
        if t.source == q {
            transitions.push(Transition::new(copy.clone(), t.label.clone(), t.target.clone()));
        }
    }
    raw.states.push(copy);
    raw.transitions = transitions;
    validate_gfa(raw).expect("splitting keeps the GFA constraints")
}

/// A guarded closed term over the given constants, at most `depth` prefixes deep.
pub fn random_term(rng: &mut impl Rng, consts: &[Name], syms: &[Symbol], depth: usize) -> Term {
    let n = rng.gen_range(1..=3);
    Term::sum_of((0..n).map(|_| random_summand(rng, consts, syms, depth)))
}

fn random_summand(rng: &mut impl Rng, consts: &[Name], syms: &[Symbol], depth: usize) -> Term {
    let a = syms.choose(rng).expect("non-empty alphabet").clone();
    match rng.gen_range(0..10) {
        0 => Term::Zero,
        1 => Term::eps_one(),
        2 | 3 => Term::one(Label::Sym(a)),
        4..=6 if !consts.is_empty() => Term::prefix(a, Term::Const(consts.choose(rng).expect("non-empty").clone())),
        _ if depth > 0 => Term::prefix(a, random_term(rng, consts, syms, depth - 1)),
        _ => Term::one(Label::Sym(a)),
    }
}

/// A process with `1..=max_consts` constants `C0, C1, ...` whose bodies are
/// random guarded terms; the root is `C0`.
pub fn random_process(rng: &mut impl Rng, max_consts: usize, k: usize) -> Process {
    let n = rng.gen_range(1..=max_consts.max(1));
    let syms = alphabet(k.max(1));
    let consts: Vec<Name> = (0..n).map(|i| Name::new(&format!("C{i}"))).collect();
    let mut env = ProcessEnv::new();
    for c in &consts {
        env.define(c.clone(), random_term(rng, &consts, &syms, 1)).expect("fresh, guarded, closed");
    }
    let root = if rng.gen_bool(0.8) { Term::Const(consts[0].clone()) } else { random_term(rng, &consts, &syms, 1) };
    Process::new(root, env).expect("every constant is defined")
}

/// A process with the same language as `p`, obtained by one of several
/// language-preserving constructions.
pub fn equivalent_variant(rng: &mut impl Rng, p: &Process) -> Process {
    let g = denote(p).expect("generated processes denote");
    let alpha: BTreeSet<Symbol> = g.alphabet().clone();
    let h = match rng.gen_range(0..4) {
        0 => reduce(&determinize(&g, &alpha).to_gfa()),
        1 => strip_epsilon(&saturate(&g)).expect("saturated"),
        2 => split_state(rng, &g),
        _ => return rewrite(rng, p),
    };
    gfa_to_term(&reduce(&h)).expect("reduced automata are representable")
}

/// Applies a few sound rewrites (duplicating, swapping and distributing
/// summands, unfolding a constant under a prefix) to the root and bodies.
fn rewrite(rng: &mut impl Rng, p: &Process) -> Process {
    let mut env = ProcessEnv::new();
    for (c, body) in p.env.iter() {
        env.define(c.clone(), rewrite_term(rng, body, &p.env, 2)).expect("rewrites keep bodies guarded");
    }
    let root = match &p.root {
        Term::Const(_) => p.root.clone(),
        t => rewrite_term(rng, t, &p.env, 2),
    };
    Process::new(root, env).expect("same constants")
}

fn rewrite_term(rng: &mut impl Rng, t: &Term, env: &ProcessEnv, fuel: usize) -> Term {
    match t {
        Term::Sum(l, r) => {
            let (l, r) = (rewrite_term(rng, l, env, fuel), rewrite_term(rng, r, env, fuel));
            match rng.gen_range(0..4) {
                0 => Term::sum(r, l),
                1 => Term::sum(Term::sum(l.clone(), r), l),
                2 => Term::sum(Term::sum(l, Term::Zero), r),
                _ => Term::sum(l, r),
            }
        }
        Term::Prefix(a, inner) => match &**inner {
            Term::Const(c) if fuel > 0 && rng.gen_bool(0.3) => {
                let body = env.get(c).expect("defined").clone();
                Term::prefix(a.clone(), rewrite_term(rng, &body, env, fuel - 1))
            }
            Term::Sum(l, r) if rng.gen_bool(0.5) => Term::sum(
                rewrite_term(rng, &Term::prefix(a.clone(), (**l).clone()), env, fuel),
                rewrite_term(rng, &Term::prefix(a.clone(), (**r).clone()), env, fuel),
            ),
            Term::PrefixOne(Label::Eps) => Term::one(Label::Sym(a.clone())),
            _ => Term::prefix(a.clone(), rewrite_term(rng, inner, env, fuel)),
        },
        Term::PrefixOne(Label::Sym(a)) if rng.gen_bool(0.2) => Term::prefix(a.clone(), Term::eps_one()),
        _ => t.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::lang_equiv;

    #[test]
    fn generators_respect_their_shapes() {
        let mut r = rng(7);
        for _ in 0..200 {
            let g = random_reduced_gfa(&mut r, 8, 3);
            assert!(g.is_reduced() && g.states().len() <= 8);
            let d = random_dgfa(&mut r, 5, 2);
            assert!(d.is_saturated() && d.is_epsilon_free() && d.is_semi_deterministic(d.alphabet()));
            let s = strip_epsilon(&split_state(&mut r, &d)).unwrap();
            assert!(s.is_saturated() && s.is_epsilon_free() && s.is_semi_deterministic(d.alphabet()));
            assert!(lang_equiv(&d, &s).holds());
        }
    }

    #[test]
    fn variants_are_equivalent() {
        let mut r = rng(11);
        for _ in 0..300 {
            let p = random_process(&mut r, 4, 2);
            let q = equivalent_variant(&mut r, &p);
            assert!(lang_equiv(&denote(&p).unwrap(), &denote(&q).unwrap()).holds(), "{p}\n{q}");
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = random_process(&mut rng(3), 4, 2);
        let b = random_process(&mut rng(3), 4, 2);
        assert_eq!(a, b);
    }
}
