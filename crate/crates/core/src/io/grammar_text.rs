use std::collections::{BTreeMap, BTreeSet};

use super::IoError;
use crate::automata::{Symbol, EPS};
use crate::grammar::{is_nonterminal_name, Grammar, Rhs};

/// Reads `A -> a A | a B | b | eps ;` rules and a `start A ;` footer.
/// `A -> ;` declares a nonterminal without productions; `#` starts a comment.
pub fn read_grammar(text: &str) -> Result<Grammar, IoError> {
    let mut toks: Vec<(usize, String)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let spaced = line.replace(';', " ; ").replace('|', " | ").replace("->", " -> ");
        toks.extend(spaced.split_whitespace().map(|t| (i + 1, t.to_string())));
    }
    let last_line = text.lines().count().max(1);
    let mut it = toks.into_iter().peekable();
    let err = |line: usize, msg: String| IoError::GrammarSyntax { line, msg };

    let mut rules: BTreeMap<String, (usize, Vec<Rhs>)> = BTreeMap::new();
    let mut start: Option<(usize, String)> = None;
    while let Some((line, tok)) = it.next() {
        if tok == "start" {
            let (l, name) = it.next().ok_or_else(|| err(line, "expected a nonterminal after `start`".into()))?;
            match it.next() {
                Some((_, s)) if s == ";" => {}
                _ => return Err(err(l, "expected `;` after the start symbol".into())),
            }
            if start.is_some() {
                return Err(err(line, "second `start` declaration".into()));
            }
            start = Some((l, name));
            continue;
        }
        if !is_nonterminal_name(&tok) {
            return Err(err(line, format!("expected a nonterminal, found `{tok}`")));
        }
        match it.next() {
            Some((_, s)) if s == "->" => {}
            _ => return Err(err(line, format!("expected `->` after `{tok}`"))),
        }
        let entry = rules.entry(tok.clone()).or_insert((line, Vec::new()));
        let mut alt: Vec<(usize, String)> = Vec::new();
        let mut alts = 0;
        loop {
            let (l, t) = it.next().ok_or_else(|| err(last_line, format!("rule for `{tok}` is missing its `;`")))?;
            if t == "|" || t == ";" {
                match alt.as_slice() {
                    [] if t == ";" && alts == 0 => {}
                    [] => return Err(err(l, "empty alternative".into())),
                    [(_, e)] if e == EPS => entry.1.push(Rhs::Empty),
                    [(la, a)] => entry.1.push(Rhs::Terminal(symbol(*la, a)?)),
                    [(la, a), (_, n)] => entry.1.push(Rhs::Step(symbol(*la, a)?, n.clone())),
                    _ => return Err(err(alt[2].0, format!("unexpected `{}`", alt[2].1))),
                }
                alt.clear();
                alts += 1;
                if t == ";" {
                    break;
                }
            } else {
                alt.push((l, t));
            }
        }
    }
    let (_, start) = start.ok_or_else(|| err(last_line, "missing `start A ;` footer".into()))?;
    for (lhs, (line, alts)) in &rules {
        for rhs in alts {
            if let Rhs::Step(_, n) = rhs {
                if !rules.contains_key(n) {
                    return Err(err(*line, format!("unknown nonterminal `{n}` in the rule for `{lhs}`")));
                }
            }
        }
    }
    let productions: Vec<(String, Rhs)> =
        rules.iter().flat_map(|(lhs, (_, alts))| alts.iter().map(move |r| (lhs.clone(), r.clone()))).collect();
    Ok(Grammar::new(rules.keys().cloned(), start, productions)?)
}

fn symbol(line: usize, a: &str) -> Result<Symbol, IoError> {
    if Symbol::is_valid_name(a) {
        Ok(Symbol::new(a))
    } else {
        Err(IoError::GrammarSyntax { line, msg: format!("`{a}` is not a terminal symbol") })
    }
}

/// One rule per nonterminal in name order, then the footer.
pub fn write_grammar(gr: &Grammar) -> String {
    let mut out = String::new();
    for n in gr.nonterminals() {
        let alts: BTreeSet<String> = gr.productions_of(n).map(|r| r.to_string()).collect();
        if alts.is_empty() {
            out.push_str(&format!("{n} -> ;\n"));
        } else {
            out.push_str(&format!("{n} -> {} ;\n", alts.into_iter().collect::<Vec<_>>().join(" | ")));
        }
    }
    out.push_str(&format!("start {} ;\n", gr.start()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{fixtures::a_plus_b_plus, isomorphic};
    use crate::grammar::grammar_to_gfa;

    #[test]
    fn a_plus_b_plus_on_one_line() {
        let gr = read_grammar("A -> a A | a B ; B -> b B | b ; start A ;").unwrap();
        assert_eq!(gr.productions().len(), 4);
        assert!(isomorphic(&grammar_to_gfa(&gr), &a_plus_b_plus()).is_some());
        let text = write_grammar(&gr);
        assert_eq!(text, "A -> a A | a B ;\nB -> b | b B ;\nstart A ;\n");
        assert_eq!(read_grammar(&text).unwrap(), gr);
    }

    #[test]
    fn single_empty_production() {
        let gr = read_grammar("A -> eps ; start A ;").unwrap();
        assert_eq!(gr.productions().iter().collect::<Vec<_>>(), [&("A".to_string(), Rhs::Empty)]);
    }

    #[test]
    fn rules_without_productions_and_comments() {
        let gr = read_grammar("# dead end\nA -> a B;\nB -> ;\nstart A;\n").unwrap();
        assert_eq!(gr.nonterminals().len(), 2);
        assert_eq!(read_grammar(&write_grammar(&gr)).unwrap(), gr);
    }

    #[test]
    fn errors() {
        assert!(matches!(read_grammar("A -> a A ;"), Err(IoError::GrammarSyntax { .. })));
        let e = read_grammar("A -> a A ;\nB -> b C ;\nstart A ;").unwrap_err();
        assert_eq!(e.to_string(), "line 2: unknown nonterminal `C` in the rule for `B`");
        assert!(read_grammar("A -> a | ; start A ;").is_err());
        assert!(read_grammar("A -> a A B ; start A ;").is_err());
        assert!(matches!(read_grammar("A -> a ; start B ;"), Err(IoError::Grammar(_))));
    }
}
