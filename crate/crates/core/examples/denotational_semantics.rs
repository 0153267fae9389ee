//! The automaton denoted by a process, built by the compositional rules.

use sfm0::automata::{isomorphic, lang_equiv};
use sfm0::io::{read_gfa, write_dot};
use sfm0::semantics::denote;
use sfm0::term::parse_process;

fn main() {
    let p = parse_process("C := (a.C + eps.1) + b.D; D := b.D + eps.1; main C;").expect("valid process");
    let g = denote(&p).expect("every constant is defined");
    println!("states: {:?}", g.all_states().collect::<Vec<_>>());
    for t in g.transitions() {
        println!("  {} -{}-> {}", t.source, t.label, t.target);
    }
    print!("{}", write_dot(&g));

    let hand_drawn = read_gfa(include_str!("../data/a_star_b_star.gfa")).expect("valid automaton");
    match isomorphic(&g, &hand_drawn) {
        Some(map) => println!("isomorphic to the hand-drawn automaton via {map:?}"),
        None => println!("not isomorphic"),
    }
    println!("same language: {}", lang_equiv(&g, &hand_drawn).holds());
}
