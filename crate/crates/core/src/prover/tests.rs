use std::collections::BTreeSet;

use super::builder::Builder;
use super::*;
use crate::automata::{lang_equiv, Label};
use crate::semantics::denote_term;
use crate::term::{is_normal_form, parse_process, parse_term, Sel};

fn proc(text: &str) -> Process {
    parse_process(text).unwrap()
}

fn name(s: &str) -> Name {
    Name::new(s)
}

/// The goal of a checked proof holds in the language semantics.
fn sound(pr: &Proof) {
    check_proof(pr).unwrap_or_else(|e| panic!("{e}\n{pr}"));
    let (l, r) = pr.goal().unwrap();
    let gl = denote_term(l, &pr.env).unwrap();
    let gr = denote_term(r, &pr.env).unwrap();
    assert!(lang_equiv(&gl, &gr).holds(), "goal {l} = {r} is not sound");
}

fn system(text: &str) -> EquationSystem {
    let p = parse_process(text).unwrap();
    let (es, _) = to_equation_system(&p).unwrap();
    es
}

fn summands(es: &EquationSystem, h: usize) -> BTreeSet<String> {
    es.body_term(h).summands().iter().map(|t| t.to_string()).collect()
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

#[test]
fn e_equals_zero_by_folding() {
    let env = proc("E := a.E; main E;").env;
    let mut b = Builder::new(env);
    let t1 = b.axiom(&Term::Zero, &[], Axiom::T1, Dir::RightToLeft, Some(&Symbol::new("a")));
    let x = name("x");
    let open = Term::prefix(Symbol::new("a"), Term::Var(x.clone()));
    let id = b.fold(&name("E"), &x, open, t1);
    b.conclude(id);
    let pr = b.finish();
    assert_eq!(pr.steps.len(), 2);
    assert_eq!(pr.goal(), Some((&Term::constant("E"), &Term::Zero)));
    sound(&pr);
}

#[test]
fn c_equals_d_through_e() {
    let p = proc("E := a.E; C := eps.1; D := a.E + eps.1; main C;");
    let mut b = Builder::new(p.env.clone());
    let a = Symbol::new("a");
    let t1 = b.axiom(&Term::Zero, &[], Axiom::T1, Dir::RightToLeft, Some(&a));
    let x = name("x");
    let e0 = b.fold(&name("E"), &x, Term::prefix(a.clone(), Term::Var(x.clone())), t1);
    let d = b.unfold(&name("D"));
    let body = b.rhs(d).clone();
    let s1 = b.cong(&body, &[Sel::Left, Sel::Body], e0);
    let cur = b.rhs(s1).clone();
    let s2 = b.axiom(&cur, &[Sel::Left], Axiom::T1, Dir::LeftToRight, None);
    let cur = b.rhs(s2).clone();
    let s3 = b.axiom(&cur, &[], Axiom::A2, Dir::LeftToRight, None);
    let cur = b.rhs(s3).clone();
    let s4 = b.axiom(&cur, &[], Axiom::A3, Dir::LeftToRight, None);
    let c = b.unfold(&name("C"));
    let c = b.sym(c);
    let dc = b.trans(&[d, s1, s2, s3, s4, c]);
    let cd = b.sym(dc);
    b.conclude(cd);
    let pr = b.finish();
    assert_eq!(pr.goal(), Some((&Term::constant("C"), &Term::constant("D"))));
    let used = pr.axioms_used();
    for ax in [Axiom::T1, Axiom::A2, Axiom::A3, Axiom::R1, Axiom::R2] {
        assert!(used.contains(&ax), "{ax} unused");
    }
    sound(&pr);
}

#[test]
fn illegal_instances_are_rejected() {
    let env = proc("C := a.1; D := b.1; main C;").env;
    let bad = ProofStep {
        lhs: parse_term("a.(C + D)").unwrap_or(Term::Zero),
        rhs: Term::Zero,
        rule: Rule::Refl,
    };
    // `C + D` cannot even be written down
    assert_eq!(bad.lhs, Term::Zero);
    let subst = Subst::new().with("x", Term::constant("C")).with("y", Term::constant("D"));
    let pr = Proof {
        env,
        steps: vec![ProofStep {
            lhs: Term::sum(Term::constant("C"), Term::constant("D")),
            rhs: Term::sum(Term::constant("D"), Term::constant("C")),
            rule: Rule::Axiom { axiom: Axiom::A2, dir: Dir::LeftToRight, subst, path: vec![] },
        }],
    };
    let err = check_proof(&pr).unwrap_err();
    assert_eq!(err.step, Some(0));
    assert!(matches!(err.failure, CheckFailure::IllegalTerm(_)));
    let inst = instantiate(Axiom::A2, &Subst::new().with("x", Term::constant("C")).with("y", parse_term("a.1").unwrap()));
    assert!(matches!(inst, Err(AxiomError::IllegalInstantiation(..))));
}

#[test]
fn checker_rejects_forward_references_and_bad_folds() {
    let env = proc("E := a.E; main E;").env;
    let pr = Proof {
        env: env.clone(),
        steps: vec![ProofStep { lhs: Term::Zero, rhs: Term::Zero, rule: Rule::Sym(3) }],
    };
    assert_eq!(check_proof(&pr).unwrap_err().failure, CheckFailure::ForwardReference(3));
    // folding with a body that is not the definition
    let mut b = Builder::new(env);
    let r = b.refl(Term::Zero);
    let x = name("x");
    let id = b.fold(&name("E"), &x, Term::prefix(Symbol::new("b"), Term::Var(x.clone())), r);
    b.conclude(id);
    let err = check_proof(&b.finish()).unwrap_err();
    assert_eq!(err.failure, CheckFailure::DefinitionMismatch(name("E")));
}

#[test]
fn normal_form_of_a_prefix_chain() {
    let (nf, pr) = to_normal_form(&proc("main a.b.1;"));
    assert!(is_normal_form(&nf));
    assert_eq!(nf.env.len(), 2);
    sound(&pr);
    let (same, pr) = to_normal_form(&proc("C := a.C + b.D + eps.1; D := b.D + eps.1; main C;"));
    assert_eq!(same.root, Term::constant("C"));
    assert_eq!(pr.steps.len(), 1);
    let (z, pr) = to_normal_form(&proc("main 0;"));
    assert_eq!(z.root, Term::Zero);
    sound(&pr);
}

#[test]
fn equation_system_wraps_a_non_constant_root() {
    let p = proc("C := 0; main a.C;");
    let (es, pr) = to_equation_system(&p).unwrap();
    assert_eq!(es.len(), 2);
    assert_ne!(es.root(), &name("C"));
    sound(&pr);
    let (es, _) = to_equation_system(&proc("C := 0; main C;")).unwrap();
    assert_eq!(es.len(), 1);
    assert!(es.body(0).is_empty());
}

#[test]
fn saturation_example() {
    let es = system("C1 := a.C1 + b.C2 + eps.1; C2 := a.C2 + eps.1; main C1;");
    let (sat, pr) = saturate_system(&es);
    sound(&pr);
    assert!(sat.is_saturated());
    assert_eq!(summands(&sat, 0).len(), 5);
    assert!(summands(&sat, 0).contains("a.1") && summands(&sat, 0).contains("b.1"));
    assert!(summands(&sat, 1).contains("a.1"));
    assert_eq!(summands(&sat, 1).len(), 3);
    let plain = system("C := a.C + b.1; main C;");
    assert_eq!(saturate_system(&plain).0, plain);
}

#[test]
fn determinization_example() {
    let p = parse_process("C1 := a.C1 + a.C2 + a.C1 + eps.1; C2 := a.C2 + eps.1; main C1;").unwrap();
    let (es, to_es) = to_equation_system(&p).unwrap();
    let alpha = BTreeSet::from([Symbol::new("a"), Symbol::new("b")]);
    let (det, pr) = semi_determinize_system(&es, &alpha).unwrap();
    sound(&pr);
    let pr = to_es.chain(pr).unwrap();
    sound(&pr);
    let names: Vec<String> = det.constants().iter().map(|c| c.to_string()).collect();
    assert_eq!(names, ["_D{1}", "_D{1,2}", "_D{}"]);
    assert_eq!(summands(&det, 0), set(&["a._D{1,2}", "b._D{}", "eps.1"]));
    assert_eq!(summands(&det, 1), set(&["a._D{1,2}", "b._D{}", "eps.1"]));
    assert_eq!(summands(&det, 2), set(&["a._D{}", "b._D{}"]));
    assert!(det.is_semi_deterministic(&alpha));
    assert_eq!(pr.goal().unwrap(), (&Term::constant("C1"), &Term::constant("_D{1}")));
    let err = semi_determinize_system(&es, &BTreeSet::new()).unwrap_err();
    assert_eq!(err, ProverError::AlphabetTooSmall(vec![Symbol::new("a")]));
}

#[test]
fn determinization_keeps_saturation() {
    let es = system("C1 := a.C1 + b.C2 + eps.1 + a.1 + b.1; C2 := a.C2 + eps.1 + a.1; main C1;");
    assert!(es.is_saturated());
    let alpha = es.alphabet();
    let (det, pr) = semi_determinize_system(&es, &alpha).unwrap();
    sound(&pr);
    assert!(det.is_saturated());
}

#[test]
fn epsilon_strip_example() {
    let es = system("C1 := a.C2 + a.1; C2 := a.C2 + a.1 + eps.1; main C1;");
    let (free, pr) = strip_epsilon_system(&es).unwrap();
    sound(&pr);
    assert!(free.is_epsilon_free());
    assert_eq!(summands(&free, 0), set(&["a.1", "a._E{1}"]));
    assert_eq!(summands(&free, 1), set(&["a.1", "a._E{1}"]));
    let rooted = system("C := a.D + eps.1; D := a.1; main C;");
    assert_eq!(strip_epsilon_system(&rooted).unwrap().0, rooted);
    let unsat = system("C := a.D; D := eps.1; main C;");
    assert_eq!(strip_epsilon_system(&unsat).unwrap_err(), ProverError::PreconditionNotSaturated);
}

#[test]
fn epsilon_strip_copies_a_reentered_root() {
    let es = system("C := a.C + a.1 + eps.1; main C;");
    let (free, pr) = strip_epsilon_system(&es).unwrap();
    sound(&pr);
    assert_eq!(free.len(), 2);
    assert!(free.has_eps(0) && !free.has_eps(1));
    assert!(free.body(0).contains(&Summand::Next(Symbol::new("a"), 1)));
}

#[test]
fn merge_needs_equal_roots() {
    let alpha = BTreeSet::from([Symbol::new("a")]);
    let run = |text: &str| {
        let p = proc(text);
        reduce_to_system(&p, &alpha).unwrap().0.epsilon_free
    };
    let plus = run("C := a.C + a.1; main C;");
    let star = run("D := a.D + eps.1; main D;");
    assert_eq!(merge_equivalent_systems(&plus, &star).unwrap().map(|_| ()), None);
    assert!(matches!(merge_equivalent_systems(&plus, &plus), Err(ProverError::NameClash(_))));
}

#[test]
fn pipeline_proves_two_presentations_of_a_plus() {
    let p = proc("C := a.C + a.1; main C;");
    let q = proc("D := a.E; E := a.E + a.1 + eps.1; main D;");
    let Outcome::Proved(pr) = prove_equiv(&p, &q).unwrap() else { panic!("expected a proof") };
    sound(&pr);
    assert_eq!(pr.goal().unwrap(), (&Term::constant("C"), &Term::constant("D")));
}

#[test]
fn representability_systems_are_equivalent() {
    let left = proc("C0 := a.C0 + b.C1 + eps.1; C1 := b.C1 + eps.1; main C0;");
    let right = proc("C2 := a.C2 + b.C3 + b.1 + eps.1; C3 := b.C3 + b.1 + a.C4; C4 := a.C4 + b.C4; main C2;");
    let Outcome::Proved(pr) = prove_equiv(&left, &right).unwrap() else { panic!("expected a proof") };
    sound(&pr);
}

#[test]
fn refutation_gives_a_distinguishing_word() {
    let p = proc("C := a.C + a.1; main C;");
    let q = proc("D := a.D + eps.1; main D;");
    let Outcome::Refuted(w) = prove_equiv(&p, &q).unwrap() else { panic!("expected a refutation") };
    assert!(w.is_empty());
}

#[test]
fn folding_shortcut_for_empty_constants() {
    let p = proc("C := a.C; main C;");
    let q = proc("main 0;");
    let Outcome::Proved(pr) = prove_equiv(&p, &q).unwrap() else { panic!("expected a proof") };
    sound(&pr);
    assert_eq!(pr.axioms_used(), BTreeSet::from([Axiom::T1, Axiom::R2]));
    let Outcome::Proved(pr) = prove_equiv(&q, &p).unwrap() else { panic!("expected a proof") };
    sound(&pr);
}

#[test]
fn clashing_names_are_renamed() {
    let p = proc("C := a.C + a.1; main C;");
    let q = proc("C := a.D; D := a.D + a.1 + eps.1; main C;");
    let Outcome::Proved(pr) = prove_equiv(&p, &q).unwrap() else { panic!("expected a proof") };
    sound(&pr);
    assert_eq!(pr.goal().unwrap().0, &Term::constant("C"));
    assert!(matches!(pr.goal().unwrap().1, Term::Const(c) if c.is_generated()));
}

#[test]
fn identical_processes_by_reflexivity() {
    let p = proc("C := a.C + eps.1; main C;");
    let Outcome::Proved(pr) = prove_equiv(&p, &p).unwrap() else { panic!("expected a proof") };
    assert_eq!(pr.steps.len(), 1);
    assert_eq!(pr.steps[0].rule, Rule::Refl);
}

#[test]
fn every_step_kind_is_budgeted() {
    let p = proc("C := a.(b.1 + c.C) + a.b.1 + eps.1; main C;");
    let q = proc("D := a.b.1 + a.c.D + eps.1; main D;");
    let Outcome::Proved(pr) = prove_equiv(&p, &q).unwrap() else { panic!("expected a proof") };
    sound(&pr);
    for s in &pr.steps {
        match s.rule.axiom() {
            Some(ax) => assert!(W.contains(&ax)),
            None => assert!(META_RULES.contains(&s.rule.kind())),
        }
    }
    assert!(pr.env.iter().all(|(_, b)| b.is_guarded()));
    let _ = Label::Eps;
}
