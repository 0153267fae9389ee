//! The `sfm0` command line. Exit codes: 0 for success or a positive answer,
//! 1 for a negative answer, 2 for invalid input or I/O failure.

use std::fmt::Display;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::automata::{bisimilar, isomorphic, lang_equiv, language_up_to, reduce, Equivalence, Gfa, Word};
use crate::grammar::{gfa_to_grammar, grammar_to_gfa, Grammar};
use crate::io;
use crate::prover::{check_proof, prove_equiv, Outcome};
use crate::semantics::{denote, gfa_to_term};
use crate::term::{print_process, Process};

/// Directory for relative `-o` paths of `prove`.
pub const OUT_DIR_VAR: &str = "SFM0_OUT_DIR";

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "sfm0", version, about = "Regular grammars, GFAs and SFM0 processes: semantics, equivalence and equational proofs")]
struct Cli {
    /// Input kind for every file, instead of guessing from the extension
    /// (`.sfm` term, `.rg` grammar, `.gfa` automaton). Required for `-` (stdin).
    #[arg(long = "as", value_enum, global = true)]
    kind: Option<Kind>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Term,
    Grammar,
    Gfa,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Conversion {
    /// grammar to automaton
    G2a,
    /// automaton to grammar
    A2g,
    /// automaton to term
    A2t,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate an input and print it in canonical form
    Parse { file: PathBuf },
    /// Print the automaton denoted by an input
    Semantics {
        file: PathBuf,
        /// emit DOT
        #[arg(long, conflicts_with = "gfa")]
        dot: bool,
        /// emit JSON (the default)
        #[arg(long)]
        gfa: bool,
    },
    /// Convert between grammars, automata and terms
    Compile {
        #[arg(value_enum)]
        conversion: Conversion,
        file: PathBuf,
    },
    /// Decide language equivalence; prints a shortest counterexample otherwise
    Equiv {
        #[arg(required_unless_present = "batch")]
        file1: Option<PathBuf>,
        #[arg(required_unless_present = "batch")]
        file2: Option<PathBuf>,
        /// file with one `FILE1 FILE2` pair per line
        #[arg(long, conflicts_with_all = ["file1", "file2"])]
        batch: Option<PathBuf>,
        /// worker threads for `--batch`
        #[arg(long, default_value_t = 1, requires = "batch")]
        jobs: usize,
    },
    /// Decide bisimilarity of the initial states
    Bisim { file1: PathBuf, file2: PathBuf },
    /// Decide isomorphism; prints the state mapping
    Iso { file1: PathBuf, file2: PathBuf },
    /// List the accepted words up to a length, `<eps>` for the empty word
    Lang {
        file: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
    /// Prove two processes equal in W, or print a counterexample
    Prove {
        file1: PathBuf,
        file2: PathBuf,
        /// certificate path (relative paths resolve against $SFM0_OUT_DIR); stdout if absent
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Check a proof certificate
    Check { cert: PathBuf },
}

/// Input as read from disk, before any conversion.
enum Input {
    Term(Process),
    Grammar(Grammar),
    Gfa(Gfa),
}

type Fallible<T> = Result<T, String>;

fn read_text(path: &Path) -> Fallible<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn kind_of(path: &Path, forced: Option<Kind>) -> Fallible<Kind> {
    if let Some(k) = forced {
        return Ok(k);
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some("sfm") => Ok(Kind::Term),
        Some("rg") => Ok(Kind::Grammar),
        Some("gfa") => Ok(Kind::Gfa),
        _ => Err(format!("{}: cannot tell the input kind from the extension; use --as", path.display())),
    }
}

fn load(path: &Path, forced: Option<Kind>) -> Fallible<Input> {
    let kind = kind_of(path, forced)?;
    let text = read_text(path)?;
    let at = |e: &dyn Display| format!("{}: {e}", path.display());
    Ok(match kind {
        Kind::Term => Input::Term(io::read_process(&text).map_err(|e| at(&e))?),
        Kind::Grammar => Input::Grammar(io::read_grammar(&text).map_err(|e| at(&e))?),
        Kind::Gfa => Input::Gfa(io::read_gfa(&text).map_err(|e| at(&e))?),
    })
}

fn load_gfa(path: &Path, forced: Option<Kind>) -> Fallible<Gfa> {
    match load(path, forced)? {
        Input::Term(p) => denote(&p).map_err(|e| format!("{}: {e}", path.display())),
        Input::Grammar(g) => Ok(grammar_to_gfa(&g)),
        Input::Gfa(g) => Ok(g),
    }
}

fn load_process(path: &Path, forced: Option<Kind>) -> Fallible<Process> {
    match load(path, forced)? {
        Input::Term(p) => Ok(p),
        Input::Grammar(g) => gfa_process(&grammar_to_gfa(&g)),
        Input::Gfa(g) => gfa_process(&g),
    }
    .map_err(|e| format!("{}: {e}", path.display()))
}

/// Unreachable states are dropped first; they do not affect the language.
fn gfa_process(g: &Gfa) -> Fallible<Process> {
    gfa_to_term(&reduce(g)).map_err(|e| e.to_string())
}

fn word(w: &Word) -> String {
    if w.is_empty() {
        "<eps>".into()
    } else {
        w.to_string()
    }
}

fn equiv_line(f1: &Path, f2: &Path, kind: Option<Kind>) -> (i32, String) {
    let result = load_gfa(f1, kind).and_then(|g1| Ok((g1, load_gfa(f2, kind)?)));
    match result {
        Err(e) => (EXIT_ERROR, format!("error: {e}")),
        Ok((g1, g2)) => match lang_equiv(&g1, &g2) {
            Equivalence::Equivalent => (EXIT_YES, "equivalent".into()),
            Equivalence::Inequivalent(w) => (EXIT_NO, format!("inequivalent: {}", word(&w))),
        },
    }
}

fn batch(list: &Path, jobs: usize, kind: Option<Kind>, out: &mut dyn Write) -> Fallible<i32> {
    let text = read_text(list)?;
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.split_whitespace().collect::<Vec<_>>().as_slice() {
            [a, b] => pairs.push((PathBuf::from(a), PathBuf::from(b))),
            _ => return Err(format!("{}:{}: expected two file names", list.display(), i + 1)),
        }
    }
    // relative names are taken relative to the list
    let base = list.parent().unwrap_or(Path::new(""));
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(|e| e.to_string())?;
    let results: Vec<(i32, String)> =
        pool.install(|| pairs.par_iter().map(|(a, b)| equiv_line(&base.join(a), &base.join(b), kind)).collect());
    let mut code = EXIT_YES;
    for ((a, b), (c, msg)) in pairs.iter().zip(&results) {
        let _ = writeln!(out, "{} {} {msg}", a.display(), b.display());
        code = code.max(*c);
    }
    Ok(code)
}

fn out_path(p: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if p.is_relative() => Path::new(&dir).join(p),
        _ => p.to_path_buf(),
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Fallible<i32> {
    let kind = cli.kind;
    let print = |out: &mut dyn Write, s: &str| {
        let _ = out.write_all(s.as_bytes());
    };
    match cli.command {
        Command::Parse { file } => {
            let text = match load(&file, kind)? {
                Input::Term(p) => print_process(&p),
                Input::Grammar(g) => io::write_grammar(&g),
                Input::Gfa(g) => io::write_gfa(&g),
            };
            print(out, &text);
        }
        Command::Semantics { file, dot, .. } => {
            let g = load_gfa(&file, kind)?;
            print(out, &if dot { io::write_dot(&g) } else { io::write_gfa(&g) });
        }
        Command::Compile { conversion, file } => {
            let g = load_gfa(&file, kind)?;
            let text = match conversion {
                Conversion::G2a => io::write_gfa(&g),
                Conversion::A2g => io::write_grammar(&gfa_to_grammar(&g)),
                Conversion::A2t => print_process(&gfa_process(&g).map_err(|e| format!("{}: {e}", file.display()))?),
            };
            print(out, &text);
        }
        Command::Equiv { batch: Some(list), jobs, .. } => return batch(&list, jobs, kind, out),
        Command::Equiv { file1, file2, .. } => {
            let (f1, f2) = (file1.expect("required"), file2.expect("required"));
            let (code, msg) = equiv_line(&f1, &f2, kind);
            if code == EXIT_ERROR {
                return Err(msg.trim_start_matches("error: ").to_string());
            }
            print(out, &format!("{msg}\n"));
            return Ok(code);
        }
        Command::Bisim { file1, file2 } => {
            let yes = bisimilar(&load_gfa(&file1, kind)?, &load_gfa(&file2, kind)?);
            print(out, if yes { "bisimilar\n" } else { "not bisimilar\n" });
            return Ok(if yes { EXIT_YES } else { EXIT_NO });
        }
        Command::Iso { file1, file2 } => {
            return Ok(match isomorphic(&load_gfa(&file1, kind)?, &load_gfa(&file2, kind)?) {
                Some(map) => {
                    print(out, "isomorphic\n");
                    for (p, q) in map {
                        print(out, &format!("{p} -> {q}\n"));
                    }
                    EXIT_YES
                }
                None => {
                    print(out, "not isomorphic\n");
                    EXIT_NO
                }
            });
        }
        Command::Lang { file, max_len } => {
            for w in language_up_to(&load_gfa(&file, kind)?, max_len) {
                print(out, &format!("{}\n", word(&w)));
            }
        }
        Command::Prove { file1, file2, output } => {
            let (p, q) = (load_process(&file1, kind)?, load_process(&file2, kind)?);
            match prove_equiv(&p, &q).map_err(|e| e.to_string())? {
                Outcome::Refuted(w) => {
                    print(out, &format!("inequivalent: {}\n", word(&w)));
                    return Ok(EXIT_NO);
                }
                Outcome::Proved(pr) => {
                    let text = io::write_proof(&pr);
                    match output {
                        None => print(out, &text),
                        Some(path) => {
                            let path = out_path(&path);
                            fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?;
                            print(out, &format!("proved in {} steps: {}\n", pr.steps.len(), path.display()));
                        }
                    }
                }
            }
        }
        Command::Check { cert } => {
            let pr = io::read_proof(&read_text(&cert)?).map_err(|e| format!("{}: {e}", cert.display()))?;
            return Ok(match check_proof(&pr) {
                Ok(()) => {
                    let (l, r) = pr.goal().expect("checked proofs are non-empty");
                    print(out, &format!("valid: {l} = {r}\n"));
                    EXIT_YES
                }
                Err(e) => {
                    print(out, &format!("invalid: {e}\n"));
                    EXIT_NO
                }
            });
        }
    }
    Ok(EXIT_YES)
}

/// Runs one command line (`args[0]` is the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_YES };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}
