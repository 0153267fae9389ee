//! The three equivalences on two presentations of a*b*: equal languages,
//! yet neither bisimilar nor isomorphic. A shortest counterexample is
//! reported when languages differ.

use sfm0::automata::{bisimilar, isomorphic, lang_equiv, Equivalence};
use sfm0::grammar::grammar_to_gfa;
use sfm0::io::{read_gfa, read_grammar};

fn main() {
    let left = read_gfa(include_str!("../data/a_star_b_star.gfa")).expect("valid");
    let right = read_gfa(include_str!("../data/a_star_b_star_det.gfa")).expect("valid");
    println!("language equivalent: {}", lang_equiv(&left, &right).holds());
    println!("bisimilar: {}", bisimilar(&left, &right));
    println!("isomorphic: {}", isomorphic(&left, &right).is_some());

    let plus = grammar_to_gfa(&read_grammar(include_str!("../data/a_plus_b_plus.rg")).expect("valid"));
    if let Equivalence::Inequivalent(w) = lang_equiv(&left, &plus) {
        println!("a*b* vs a+b+ differ on {:?}", w.to_string());
    }
}
