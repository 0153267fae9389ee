//! Saturation and removal of eps edges, first on automata and then as
//! equational proofs on systems of equations.

use sfm0::automata::{saturate, strip_epsilon};
use sfm0::io::write_gfa;
use sfm0::prover::{check_proof, saturate_system, strip_epsilon_system, to_equation_system};
use sfm0::semantics::denote;
use sfm0::term::parse_process;

fn main() {
    let p = parse_process("C := a.D; D := a.D + eps.1; main C;").expect("valid");
    let g = saturate(&denote(&p).expect("closed"));
    print!("{}", write_gfa(&g));
    print!("{}", write_gfa(&strip_epsilon(&g).expect("saturated")));

    let (es, _) = to_equation_system(&p).expect("normal form");
    println!("system:\n{es}");
    let (sat, proof) = saturate_system(&es);
    println!("saturated:\n{sat}");
    println!("proof of {} steps, valid: {}", proof.steps.len(), check_proof(&proof).is_ok());
    let (free, proof) = strip_epsilon_system(&sat).expect("saturated");
    println!("eps-free:\n{free}");
    println!("proof of {} steps, valid: {}", proof.steps.len(), check_proof(&proof).is_ok());
}
