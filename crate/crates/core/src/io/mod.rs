//! External representations: JSON for automata (`.gfa`) and proof
//! certificates (`.wproof`), line-oriented text for grammars (`.rg`) and
//! processes (`.sfm`), and DOT export.
//!
//! `eps` spells the empty label everywhere except in DOT labels.

mod dot;
mod gfa_json;
mod grammar_text;
mod proof_json;

use thiserror::Error;

use crate::automata::GfaError;
use crate::grammar::GrammarError;
use crate::term::{ParseError, TermError};

pub use dot::write_dot;
pub use gfa_json::{read_gfa, write_gfa};
pub use grammar_text::{read_grammar, write_grammar};
pub use proof_json::{read_proof, write_proof, PROOF_VERSION};

pub use crate::term::{parse_process as read_process, print_process as write_process};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid automaton: {0}")]
    Gfa(#[from] GfaError),
    #[error("line {line}: {msg}")]
    GrammarSyntax { line: usize, msg: String },
    #[error("invalid grammar: {0}")]
    Grammar(#[from] GrammarError),
    #[error("{field}: {source}")]
    Term {
        field: String,
        #[source]
        source: ParseError,
    },
    #[error("{field}: {source}")]
    Definition {
        field: String,
        #[source]
        source: TermError,
    },
    #[error("{field}: {msg}")]
    Schema { field: String, msg: String },
}

impl IoError {
    fn schema(field: impl Into<String>, msg: impl Into<String>) -> IoError {
        IoError::Schema { field: field.into(), msg: msg.into() }
    }
}
