use std::collections::BTreeSet;

use thiserror::Error;

use super::{Name, Process, ProcessEnv, Term, TermError};
use crate::automata::{Label, Symbol, EPS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: `eps` may only prefix `1`")]
    EpsilonMisuse { line: usize, col: usize },
    #[error("{line}:{col}: `{name}` cannot be used as a summand")]
    ConstAsSummand { line: usize, col: usize, name: String },
    #[error("{line}:{col}: names starting with `_` are reserved for generated constants")]
    ReservedName { line: usize, col: usize },
    #[error("missing `main` declaration")]
    MissingMain,
    #[error("{line}:{col}: second `main` declaration")]
    DuplicateMain { line: usize, col: usize },
    #[error(transparent)]
    Term(#[from] TermError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    /// lowercase identifier, including `eps`
    Sym(String),
    /// uppercase or `_` identifier
    Name(String),
    Main,
    Zero,
    One,
    Dot,
    Plus,
    LParen,
    RParen,
    Assign,
    Semi,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Sym(s) | Tok::Name(s) => format!("`{s}`"),
            Tok::Main => "`main`".into(),
            Tok::Zero => "`0`".into(),
            Tok::One => "`1`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Plus => "`+`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Assign => "`:=`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let syntax = |line, col, msg: String| ParseError::Syntax { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => advance(1, &mut i),
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '0' => {
                out.push(Spanned { tok: Tok::Zero, line: l0, col: c0 });
                advance(1, &mut i);
            }
            '1' => {
                out.push(Spanned { tok: Tok::One, line: l0, col: c0 });
                advance(1, &mut i);
            }
            '.' | '+' | '(' | ')' | ';' => {
                let tok = match c {
                    '.' => Tok::Dot,
                    '+' => Tok::Plus,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    _ => Tok::Semi,
                };
                out.push(Spanned { tok, line: l0, col: c0 });
                advance(1, &mut i);
            }
            ':' if chars.get(i + 1) == Some(&'=') => {
                out.push(Spanned { tok: Tok::Assign, line: l0, col: c0 });
                advance(2, &mut i);
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                // generated names may carry an index set suffix: `_B{1,2}`
                if c == '_' && chars.get(i) == Some(&'{') {
                    while i < chars.len() && chars[i] != '}' {
                        if !(chars[i].is_ascii_digit() || matches!(chars[i], '{' | ',')) {
                            return Err(syntax(l0, c0, "malformed generated name".into()));
                        }
                        i += 1;
                    }
                    if i == chars.len() {
                        return Err(syntax(l0, c0, "unterminated `{` in name".into()));
                    }
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                col += i - start;
                let tok = if word == "main" {
                    Tok::Main
                } else if c.is_ascii_lowercase() {
                    Tok::Sym(word)
                } else {
                    Tok::Name(word)
                };
                out.push(Spanned { tok, line: l0, col: c0 });
            }
            other => return Err(syntax(l0, c0, format!("unexpected character `{other}`"))),
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    vars: &'a [&'a str],
    allow_generated: bool,
}

impl Parser<'_> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, at: &Spanned, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: at.line, col: at.col, msg: msg.into() }
    }

    fn expect(&mut self, tok: Tok) -> Result<Spanned, ParseError> {
        let t = self.bump();
        if t.tok == tok {
            Ok(t)
        } else {
            Err(self.error(&t, format!("expected {}, found {}", tok.describe(), t.tok.describe())))
        }
    }

    fn name(&self, at: &Spanned, s: &str) -> Result<Term, ParseError> {
        if self.vars.contains(&s) {
            return Ok(Term::Var(Name::new(s)));
        }
        if s.starts_with('_') && !self.allow_generated {
            return Err(ParseError::ReservedName { line: at.line, col: at.col });
        }
        Ok(Term::Const(Name::new(s)))
    }

    /// term := summand ("+" summand)*
    fn term(&mut self) -> Result<Term, ParseError> {
        let first_at = self.peek().clone();
        let mut acc = self.summand()?;
        let mut acc_at = first_at;
        while self.peek().tok == Tok::Plus {
            self.bump();
            let at = self.peek().clone();
            let rhs = self.summand()?;
            check_summand(&acc, &acc_at)?;
            check_summand(&rhs, &at)?;
            acc = Term::sum(acc, rhs);
            acc_at = at;
        }
        Ok(acc)
    }

    fn summand(&mut self) -> Result<Term, ParseError> {
        let t = self.bump();
        match &t.tok {
            Tok::Zero => Ok(Term::Zero),
            Tok::LParen => {
                let inner = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Name(s) => self.name(&t, s),
            Tok::Sym(x) if self.vars.contains(&x.as_str()) => Ok(Term::Var(Name::new(x))),
            Tok::Sym(a) => self.prefix(&t, a.clone()),
            Tok::One => Err(self.error(&t, "`1` may only appear as `α.1`")),
            other => Err(self.error(&t, format!("expected a term, found {}", other.describe()))),
        }
    }

    /// After a label: `.` then `1`, `0`, a name, a parenthesised term or another prefix.
    fn prefix(&mut self, at: &Spanned, label: String) -> Result<Term, ParseError> {
        self.expect(Tok::Dot)?;
        let t = self.bump();
        if label == EPS {
            return match t.tok {
                Tok::One => Ok(Term::PrefixOne(Label::Eps)),
                _ => Err(ParseError::EpsilonMisuse { line: at.line, col: at.col }),
            };
        }
        let a = Symbol::new(&label);
        let body = match &t.tok {
            Tok::One => return Ok(Term::PrefixOne(Label::Sym(a))),
            Tok::Zero => Term::Zero,
            Tok::Name(s) => self.name(&t, s)?,
            Tok::LParen => {
                let inner = self.term()?;
                self.expect(Tok::RParen)?;
                inner
            }
            Tok::Sym(x) if self.vars.contains(&x.as_str()) => Term::Var(Name::new(x)),
            Tok::Sym(b) => self.prefix(&t, b.clone())?,
            other => return Err(self.error(&t, format!("expected a prefix target, found {}", other.describe()))),
        };
        Ok(Term::prefix(a, body))
    }
}

fn check_summand(t: &Term, at: &Spanned) -> Result<(), ParseError> {
    match t {
        Term::Const(c) | Term::Var(c) => {
            Err(ParseError::ConstAsSummand { line: at.line, col: at.col, name: c.to_string() })
        }
        _ => Ok(()),
    }
}

fn parse_with(text: &str, vars: &[&str], allow_generated: bool) -> Result<Term, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, vars, allow_generated };
    let t = p.term()?;
    let end = p.bump();
    if end.tok != Tok::Eof {
        return Err(p.error(&end, format!("unexpected {}", end.tok.describe())));
    }
    Ok(t)
}

/// Parses a closed term. Generated `_` names are accepted.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    parse_with(text, &[], true)
}

/// Parses a term in which the listed identifiers are variables.
pub fn parse_open_term(text: &str, vars: &[&str]) -> Result<Term, ParseError> {
    parse_with(text, vars, true)
}

/// Parses a `.sfm` file: `NAME := term;` definitions and one `main term;`.
pub fn parse_process(text: &str) -> Result<Process, ParseError> {
    parse_process_with(text, false)
}

pub(crate) fn parse_process_with(text: &str, allow_generated: bool) -> Result<Process, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, vars: &[], allow_generated };
    let mut env = ProcessEnv::new();
    let mut main: Option<Term> = None;
    let mut referenced: BTreeSet<Name> = BTreeSet::new();
    loop {
        let t = p.bump();
        match &t.tok {
            Tok::Eof => break,
            Tok::Main => {
                if main.is_some() {
                    return Err(ParseError::DuplicateMain { line: t.line, col: t.col });
                }
                let root = p.term()?;
                p.expect(Tok::Semi)?;
                referenced.extend(root.constants_in());
                main = Some(root);
            }
            Tok::Name(s) => {
                if s.starts_with('_') && !allow_generated {
                    return Err(ParseError::ReservedName { line: t.line, col: t.col });
                }
                p.expect(Tok::Assign)?;
                let body = p.term()?;
                p.expect(Tok::Semi)?;
                referenced.extend(body.constants_in());
                env.define(Name::new(s), body)?;
            }
            other => {
                return Err(p.error(&t, format!("expected a definition or `main`, found {}", other.describe())));
            }
        }
    }
    let root = main.ok_or(ParseError::MissingMain)?;
    if let Some(c) = referenced.into_iter().find(|c| !env.contains(c)) {
        return Err(TermError::UndefinedConstant(c).into());
    }
    Ok(Process::new(root, env)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::print_process;

    #[test]
    fn parses_a_recursive_definition() {
        let p = parse_process("C := a.C + eps.1; main C;").unwrap();
        let body = p.env.get(&Name::new("C")).unwrap();
        assert_eq!(
            body,
            &Term::sum(Term::prefix(Symbol::new("a"), Term::constant("C")), Term::eps_one())
        );
        assert_eq!(p.root, Term::constant("C"));
    }

    #[test]
    fn zero_process() {
        let p = parse_process("main 0;").unwrap();
        assert_eq!(p.root, Term::Zero);
        assert!(p.env.is_empty());
    }

    #[test]
    fn eps_must_prefix_one() {
        assert!(matches!(parse_process("C := eps.C; main C;"), Err(ParseError::EpsilonMisuse { line: 1, col: 6 })));
        assert!(matches!(parse_term("eps.a.1"), Err(ParseError::EpsilonMisuse { .. })));
    }

    #[test]
    fn constants_are_not_summands() {
        let err = parse_process("C := a.1 + D; D := b.1; main C;").unwrap_err();
        assert_eq!(err, ParseError::ConstAsSummand { line: 1, col: 12, name: "D".into() });
        assert!(parse_term("a.(C) + b.1").is_ok());
    }

    #[test]
    fn definitions_must_be_guarded_and_complete() {
        assert_eq!(
            parse_process("C := D; D := a.1; main C;").unwrap_err(),
            ParseError::Term(TermError::UnguardedBody(Name::new("C")))
        );
        assert_eq!(
            parse_process("C := a.D; main C;").unwrap_err(),
            ParseError::Term(TermError::UndefinedConstant(Name::new("D")))
        );
        assert_eq!(parse_process("C := a.1;").unwrap_err(), ParseError::MissingMain);
        assert!(matches!(parse_process("main _K;"), Err(ParseError::ReservedName { .. })));
    }

    #[test]
    fn diagnostics_carry_positions() {
        let err = parse_process("C := a.1 +\n  ; main C;").unwrap_err();
        assert_eq!(err, ParseError::Syntax { line: 2, col: 3, msg: "expected a term, found `;`".into() });
    }

    #[test]
    fn comments_and_generated_names() {
        let p = parse_process_with("# header\n_B{1,2} := a._B{} + eps.1; _B{} := 0; main _B{1,2}; # done", true).unwrap();
        assert_eq!(p.root, Term::constant("_B{1,2}"));
        let again = parse_process_with(&print_process(&p), true).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn prefix_binds_tighter_than_choice() {
        let t = parse_term("a.b.1 + c.1").unwrap();
        assert_eq!(t.to_string(), "a.b.1 + c.1");
        assert!(t.is_sum());
        let u = parse_term("a.(b.1 + c.1)").unwrap();
        assert!(matches!(u, Term::Prefix(..)));
    }
}
