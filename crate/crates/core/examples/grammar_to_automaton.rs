//! Reads a right-linear grammar, compiles it to a GFA and back, and lists
//! the short words of its language.

use sfm0::automata::language_up_to;
use sfm0::grammar::{gfa_to_grammar, grammar_to_gfa};
use sfm0::io::{read_grammar, write_dot, write_gfa, write_grammar};

fn main() {
    let gr = read_grammar("A -> a A | a B ;\nB -> b B | b ;\nstart A ;\n").expect("valid grammar");
    let g = grammar_to_gfa(&gr);
    println!("{} non-final states, {} transitions", g.states().len(), g.transitions().len());
    print!("{}", write_gfa(&g));
    print!("{}", write_dot(&g));

    let words: Vec<String> = language_up_to(&g, 4).iter().map(|w| w.to_string()).collect();
    println!("words up to length 4: {}", words.join(" "));

    // the inverse translation gives back the same productions
    print!("{}", write_grammar(&gfa_to_grammar(&g)));
}
