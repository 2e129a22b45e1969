use std::path::PathBuf;
use std::process::{Command, Output};

const B2: &str = r"(p \to q) \land (q \to r) \to (p \to r)";

fn pearl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pearl")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pearl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn single_formula_with_verification() {
    let o = pearl(&["-i", B2, "--verify", "2", "--trace"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for needle in [
        "initial inequalities:",
        "approximation:",
        "elimination order: [+p, +r, +q]",
        "pure:",
        "simplified:",
        "trace:",
        r"correspondent: \forall x_0 \forall x_1 \forall y_1",
        "verified: agrees on all 211 frames with at most 2 worlds",
    ] {
        assert!(text.contains(needle), "missing {needle:?} in\n{text}");
    }
}

#[test]
fn bundled_corpus_is_stable() {
    let a = pearl(&["--corpus", "bundled-axioms", "--format", "tptp"]);
    let b = pearl(&["--corpus", "bundled-axioms", "--format", "tptp"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 50);
    assert!(text.lines().skip(1).all(|l| l.contains("| ok ")), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(pearl(&["-i", r"p \to"]).status.code(), Some(2));
    let fail = pearl(&["-i", r"(p \to q) \to (((p \to q) \to r) \to r)"]);
    assert_eq!(fail.status.code(), Some(1));
    assert!(stdout(&fail).contains("elimination failed"));
    assert_ne!(pearl(&["-i", "p", "--verify", "4"]).status.code(), Some(0));
    assert_ne!(pearl(&[]).status.code(), Some(0));
    assert_eq!(pearl(&["--corpus", "no-such-bundle"]).status.code(), Some(2));
}

#[test]
fn wrong_expectation_is_reported() {
    let path = scratch("corpus.jsonl");
    std::fs::write(
        &path,
        concat!(
            r#"{"name":"identity","formula":"p \\to p","expected_fo":"! [X0] : leq(X0,X0)"}"#,
            "\n\n",
            r#"{"name":"wrong","formula":"p \\to p","expected_fo":"$false"}"#,
            "\n"
        ),
    )
    .unwrap();
    let o = pearl(&["--corpus", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("identity") && l.contains("| ok ")), "{text}");
    assert!(text.lines().any(|l| l.starts_with("wrong") && l.contains("mismatch")), "{text}");
}

#[test]
fn file_input_and_output_file() {
    let input = scratch("b2.tex");
    let out = scratch("b2.out");
    std::fs::write(&input, format!("{B2}\n")).unwrap();
    let o = pearl(&["--file", input.to_str().unwrap(), "--format", "tptp", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&out).unwrap();
    assert!(written.contains("fof(correspondent, axiom,"), "{written}");
}

#[test]
fn json_output_parses() {
    let o = pearl(&["-i", B2, "--format", "json", "--verify", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["goals"].is_array());
    assert_eq!(v["verify"]["agree"], serde_json::Value::Bool(true));
    assert!(v["rendered"].is_string());
}

#[test]
fn bunched_syntax() {
    let o = pearl(&["-i", "p * q -* q * p", "--syntax", "bi", "--verify", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
