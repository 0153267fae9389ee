//! Open terms and the least-fixpoint reading of a recursive definition:
//! for C ≐ p{C/x}, the language of C is (L_x)* · L_1, where L_x are the
//! words leading to x and L_1 those leading to 1.

use sfm0::automata::{language_up_to, Word};
use sfm0::semantics::{denote, lfp_language_up_to, open_languages_up_to};
use sfm0::term::{parse_open_term, parse_process, Name, ProcessEnv};

fn show(ws: &std::collections::BTreeSet<Word>) -> String {
    ws.iter().map(|w| if w.is_empty() { "<eps>".to_string() } else { w.to_string() }).collect::<Vec<_>>().join(" ")
}

fn main() {
    let x = Name::new("x");
    let body = parse_open_term("a.x + b.(a.x + c.1)", &["x"]).expect("valid");
    let open = open_languages_up_to(&body, &x, &ProcessEnv::new(), 6).expect("closed apart from x");
    println!("words to 1: {}", show(&open.l_down));
    println!("words to x: {}", show(&open.l_var));

    let lfp = lfp_language_up_to(&open.l_down, &open.l_var, 6).expect("no eps loop");
    let c = parse_process("C := a.C + b.(a.C + c.1); main C;").expect("valid");
    let direct = language_up_to(&denote(&c).expect("closed"), 6);
    println!("fixpoint formula agrees with the automaton up to length 6: {}", lfp == direct);
}
