//! Every reduced GFA is the denotation of some process: translate random
//! automata to terms and back, and compare up to isomorphism.

use sfm0::automata::isomorphic;
use sfm0::random::{random_reduced_gfa, rng};
use sfm0::semantics::{denote, gfa_to_term};

fn main() {
    let mut r = rng(2024);
    let g = std::iter::repeat_with(|| random_reduced_gfa(&mut r, 4, 2)).find(|g| g.states().len() >= 3).expect("endless");
    for t in g.transitions() {
        println!("  {} -{}-> {}", t.source, t.label, t.target);
    }
    let p = gfa_to_term(&g).expect("reduced");
    println!("{p}");

    let mut ok = 0;
    for _ in 0..100 {
        let g = random_reduced_gfa(&mut r, 8, 3);
        let back = denote(&gfa_to_term(&g).expect("reduced")).expect("closed process");
        ok += usize::from(isomorphic(&g, &back).is_some());
    }
    println!("{ok}/100 round trips isomorphic");
}
