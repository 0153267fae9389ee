use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use sfm0::cli::run;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn sfm0(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("sfm0").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn equiv_reports_equal_languages() {
    let (code, out, _) = sfm0(&["equiv", &data("a_star_b_star.gfa"), &data("a_star_b_star_det.gfa")]);
    assert_eq!((code, out.as_str()), (0, "equivalent\n"));
}

#[test]
fn equiv_prints_a_counterexample() {
    let (code, out, _) = sfm0(&["equiv", &data("a_plus_b_plus.rg"), &data("a_star_b_star.sfm")]);
    assert_eq!((code, out.as_str()), (1, "inequivalent: <eps>\n"));
}

#[test]
fn lang_lists_short_words() {
    let (code, out, _) = sfm0(&["lang", &data("a_plus_b_plus.rg"), "--max-len", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "ab\naab\nabb\n");
    let (_, out, _) = sfm0(&["lang", &data("a_star_b_star.sfm"), "--max-len", "1"]);
    assert_eq!(out, "<eps>\na\nb\n");
}

#[test]
fn prove_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("p.wproof");
    let (code, out, err) = sfm0(&["prove", &data("a_plus_1.sfm"), &data("a_plus_2.sfm"), "-o", cert.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("proved in "));
    let (code, out, _) = sfm0(&["check", cert.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, "valid: C = D\n"));
}

#[test]
fn prove_refutes_with_a_word() {
    let (code, out, _) = sfm0(&["prove", &data("a_plus_b_plus.rg"), &data("a_star_b_star.gfa")]);
    assert_eq!((code, out.as_str()), (1, "inequivalent: <eps>\n"));
}

#[test]
fn check_rejects_a_tampered_certificate() {
    let (code, text, _) = sfm0(&["prove", &data("a_plus_1.sfm"), &data("a_plus_2.sfm")]);
    assert_eq!(code, 0);
    let tampered = text.replacen("\"kind\": \"AxiomLR\"", "\"kind\": \"AxiomRL\"", 1);
    assert_ne!(tampered, text);
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("bad.wproof");
    fs::write(&cert, tampered).unwrap();
    let (code, out, _) = sfm0(&["check", cert.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.starts_with("invalid: "), "{out}");
}

#[test]
fn bisim_and_iso() {
    let (l, r) = (data("a_star_b_star.gfa"), data("a_star_b_star_det.gfa"));
    assert_eq!(sfm0(&["bisim", &l, &r]).0, 1);
    assert_eq!(sfm0(&["iso", &l, &r]).0, 1);
    let (code, out, _) = sfm0(&["iso", &l, &data("a_star_b_star.sfm")]);
    assert_eq!(code, 0);
    assert_eq!(out, "isomorphic\nq0 -> C\nq1 -> D\nr0 -> 1\n");
    assert_eq!(sfm0(&["bisim", &l, &data("a_star_b_star.sfm")]).0, 0);
}

#[test]
fn compile_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (code, gfa, _) = sfm0(&["compile", "g2a", &data("a_plus_b_plus.rg")]);
    assert_eq!(code, 0);
    let g = dir.path().join("g.gfa");
    fs::write(&g, &gfa).unwrap();
    let (_, grammar, _) = sfm0(&["compile", "a2g", g.to_str().unwrap()]);
    assert_eq!(grammar, "A -> a A | a B ;\nB -> b | b B ;\nstart A ;\n");
    let (_, term, _) = sfm0(&["compile", "a2t", g.to_str().unwrap()]);
    let t = dir.path().join("t.sfm");
    fs::write(&t, &term).unwrap();
    assert_eq!(sfm0(&["iso", g.to_str().unwrap(), t.to_str().unwrap()]).0, 0);
}

#[test]
fn semantics_and_parse() {
    let (code, dot, _) = sfm0(&["semantics", &data("a_star_b_star.sfm"), "--dot"]);
    assert_eq!(code, 0);
    assert!(dot.starts_with("digraph") && dot.contains("doublecircle") && dot.contains("ε"));
    let (_, json, _) = sfm0(&["semantics", &data("a_star_b_star.sfm")]);
    assert!(sfm0::io::read_gfa(&json).is_ok());
    let (code, out, _) = sfm0(&["parse", &data("a_star_b_star.sfm")]);
    assert_eq!((code, out.as_str()), (0, "C := a.C + eps.1 + b.D;\nD := b.D + eps.1;\nmain C;\n"));
}

#[test]
fn errors_exit_with_two() {
    let (code, _, err) = sfm0(&["equiv", "missing.sfm", &data("a_plus_1.sfm")]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error: missing.sfm"));
    assert_eq!(sfm0(&["lang", &data("pairs.txt"), "--max-len", "2"]).0, 2);
    assert_eq!(sfm0(&["--as", "gfa", "lang", &data("a_plus_1.sfm"), "--max-len", "2"]).0, 2);
    assert_eq!(sfm0(&["frobnicate"]).0, 2);
    assert_eq!(sfm0(&["--help"]).0, 0);
}

#[test]
fn batch_keeps_input_order() {
    let (code, out, _) = sfm0(&["equiv", "--batch", &data("pairs.txt"), "--jobs", "4"]);
    assert_eq!(code, 1);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines,
        [
            "a_star_b_star.gfa a_star_b_star_det.gfa equivalent",
            "a_plus_1.sfm a_plus_2.sfm equivalent",
            "a_plus_b_plus.rg a_star_b_star.sfm inequivalent: <eps>",
        ]
    );
}

#[test]
fn binary_writes_into_the_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let bin = PathBuf::from(env!("CARGO_BIN_EXE_sfm0"));
    let status = Command::new(&bin)
        .args(["prove", &data("a_plus_1.sfm"), &data("a_plus_2.sfm"), "-o", "out.wproof"])
        .env("SFM0_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0));
    let cert = dir.path().join("out.wproof");
    let check = Command::new(&bin).arg("check").arg(&cert).output().unwrap();
    assert_eq!(check.status.code(), Some(0));

    let stdin = Command::new(&bin)
        .args(["--as", "term", "lang", "-", "--max-len", "2"])
        .stdin(fs::File::open(data("a_plus_1.sfm")).unwrap())
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(stdin.stdout).unwrap(), "a\naa\n");
}
