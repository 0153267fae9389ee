//! Languages of terms with one free variable.

use std::collections::BTreeSet;

use super::{denote_term, SemanticsError};
use crate::automata::{words_reaching, Target, Word};
use crate::term::{Name, ProcessEnv, Term};

/// Words of length at most `bound` that end the run (`l_down`) or reach the
/// variable (`l_var`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenLanguages {
    pub l_down: BTreeSet<Word>,
    pub l_var: BTreeSet<Word>,
    pub bound: usize,
}

/// `L_p^↓` and `L_p^x` up to length `k`; `x` is a deadlocked marker state in
/// the denotation of `p`.
pub fn open_languages_up_to(p: &Term, x: &Name, env: &ProcessEnv, k: usize) -> Result<OpenLanguages, SemanticsError> {
    let g = denote_term(p, env)?;
    let mut reached = words_reaching(&g, k);
    let l_down = reached.remove(&Target::Final).unwrap_or_default();
    let l_var = reached.remove(&Target::State(x.to_string())).unwrap_or_default();
    Ok(OpenLanguages { l_down, l_var, bound: k })
}

/// `(l_var)* · l_down`, truncated to length `k`.
pub fn lfp_language_up_to(
    l_down: &BTreeSet<Word>,
    l_var: &BTreeSet<Word>,
    k: usize,
) -> Result<BTreeSet<Word>, SemanticsError> {
    if l_var.iter().any(Word::is_empty) {
        return Err(SemanticsError::EpsilonInVarLanguage);
    }
    let mut acc: BTreeSet<Word> = l_down.iter().filter(|w| w.len() <= k).cloned().collect();
    let mut fresh = acc.clone();
    while !fresh.is_empty() {
        let mut next = BTreeSet::new();
        for u in l_var {
            for w in &fresh {
                if u.len() + w.len() <= k {
                    let uw = u.concat(w);
                    if !acc.contains(&uw) {
                        next.insert(uw);
                    }
                }
            }
        }
        acc.extend(next.iter().cloned());
        fresh = next;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::language_up_to;
    use crate::semantics::denote;
    use crate::term::{parse_open_term, parse_process};

    fn words(ws: &[&str]) -> BTreeSet<Word> {
        ws.iter().map(|w| Word::from_chars(w)).collect()
    }

    #[test]
    fn distributed_prefix_has_the_same_open_languages() {
        let x = Name::new("x");
        let env = ProcessEnv::new();
        let p1 = parse_open_term("a.(b.1 + c.x)", &["x"]).unwrap();
        let p2 = parse_open_term("a.c.x + a.b.1", &["x"]).unwrap();
        let l1 = open_languages_up_to(&p1, &x, &env, 5).unwrap();
        let l2 = open_languages_up_to(&p2, &x, &env, 5).unwrap();
        assert_eq!(l1.l_down, words(&["ab"]));
        assert_eq!(l1.l_var, words(&["ac"]));
        assert_eq!(l1, l2);
    }

    #[test]
    fn least_fixed_point_matches_the_recursive_constant() {
        let x = Name::new("x");
        let p = parse_open_term("a.x + b.1", &["x"]).unwrap();
        let o = open_languages_up_to(&p, &x, &ProcessEnv::new(), 6).unwrap();
        let lfp = lfp_language_up_to(&o.l_down, &o.l_var, 6).unwrap();
        let c = parse_process("C := a.C + b.1; main C;").unwrap();
        assert_eq!(lfp, language_up_to(&denote(&c).unwrap(), 6));
        assert_eq!(lfp, words(&["b", "ab", "aab", "aaab", "aaaab", "aaaaab"]));
    }

    #[test]
    fn empty_word_in_var_language_is_rejected() {
        let e = lfp_language_up_to(&words(&["a"]), &BTreeSet::from([Word::empty()]), 3);
        assert_eq!(e.unwrap_err(), SemanticsError::EpsilonInVarLanguage);
    }
}
