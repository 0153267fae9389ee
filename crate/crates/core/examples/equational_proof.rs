//! A proof that a constant with an empty language equals 0, written out
//! step by step, serialized, and checked again after reading it back.

use sfm0::io::{read_proof, write_proof};
use sfm0::prover::{check_proof, prove_equiv, Outcome};
use sfm0::term::parse_process;

fn main() {
    let e = parse_process("E := a.E; main E;").expect("valid");
    let zero = parse_process("main 0;").expect("valid");
    let Outcome::Proved(proof) = prove_equiv(&e, &zero).expect("well-formed inputs") else {
        unreachable!("E has the empty language")
    };
    print!("{proof}");
    println!("axioms used: {:?}", proof.axioms_used());

    let text = write_proof(&proof);
    print!("{text}");
    let back = read_proof(&text).expect("round trip");
    println!("checks after reading back: {}", check_proof(&back).is_ok());
}
