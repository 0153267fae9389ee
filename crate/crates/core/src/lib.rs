//! Regular grammars, their automata (GFAs) and the process algebra SFM0.
//!
//! - [`automata`]: GFAs, saturation, eps-stripping, and exact decision procedures for
//!   language equivalence, bisimilarity and isomorphism.
//! - [`term`] and [`semantics`]: SFM0 syntax and its denotation as a GFA, with the
//!   inverse map from reduced GFAs back to terms.
//! - [`prover`]: the axioms W, proof certificates, an independent checker and the
//!   pipeline that proves any two language-equivalent processes equal.
//! - [`io`]: `.sfm`, `.rg`, `.gfa`, `.wproof` and DOT formats. [`cli`] is behind the `sfm0` binary.
//!
//! ```
//! use sfm0::prover::{check_proof, prove_equiv, Outcome};
//! use sfm0::term::parse_process;
//!
//! let p = parse_process("C := a.C + a.1; main C;").unwrap();
//! let q = parse_process("D := a.E; E := a.E + eps.1; main D;").unwrap();
//! let Outcome::Proved(proof) = prove_equiv(&p, &q).unwrap() else { panic!() };
//! assert!(check_proof(&proof).is_ok());
//! ```

pub mod automata;
pub mod cli;
pub mod grammar;
pub mod io;
pub mod prover;
pub mod random;
pub mod semantics;
pub mod term;
