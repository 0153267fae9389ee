//! The full decision procedure: language-equivalent processes get a proof
//! in W assembled from normal form, saturation, semi-determinization and
//! eps removal; the others get a shortest distinguishing word.

use std::collections::BTreeSet;

use sfm0::prover::{check_proof, prove_equiv, reduce_to_system, Outcome};
use sfm0::term::parse_process;

fn main() {
    let p = parse_process(include_str!("../data/a_plus_1.sfm")).expect("valid");
    let q = parse_process(include_str!("../data/a_plus_2.sfm")).expect("valid");

    let alpha: BTreeSet<_> = p.alphabet().union(&q.alphabet()).cloned().collect();
    let (stages, _) = reduce_to_system(&q, &alpha).expect("closed process");
    println!("normal form:\n{}", stages.normal_form);
    println!("system:\n{}", stages.system);
    println!("saturated:\n{}", stages.saturated);
    println!("semi-deterministic:\n{}", stages.semi_deterministic);
    println!("eps-free:\n{}", stages.epsilon_free);

    match prove_equiv(&p, &q).expect("closed processes") {
        Outcome::Proved(pr) => {
            let (l, r) = pr.goal().expect("non-empty");
            println!("{l} = {r} in {} steps; checker: {:?}", pr.steps.len(), check_proof(&pr));
        }
        Outcome::Refuted(w) => println!("differ on {w}"),
    }

    let r = parse_process("F := a.F + b.1; main F;").expect("valid");
    if let Outcome::Refuted(w) = prove_equiv(&p, &r).expect("closed processes") {
        println!("a+ and a*b differ on {w:?}", w = w.to_string());
    }
}
