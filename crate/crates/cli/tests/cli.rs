use std::io::Write;
use std::process::{Command, Output, Stdio};

const EXAMPLE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/example.gauss");

fn tvt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tvt"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Runs and checks the exit status; returns the standard output lines.
fn expect(args: &[&str], status: i32) -> Vec<String> {
    let out = tvt(args);
    assert_eq!(
        out.status.code(),
        Some(status),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(
        text.is_empty() || text.ends_with('\n'),
        "{args:?}: unterminated output"
    );
    text.lines().map(str::to_string).collect()
}

fn tmp_file(name: &str, contents: &str) -> String {
    let path = std::env::temp_dir().join(format!("tvt-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn documented_examples() {
    assert_eq!(
        expect(&["eq", "-n", "2", "r1 s1 r1", "g2 g1 s1 g1 g2"], 0),
        ["equal"]
    );
    assert_eq!(expect(&["nabla", "-n", "3"], 0), ["r1 r2 r1 g1 g2 g3"]);
    assert_eq!(expect(&["bar-parity", EXAMPLE], 0), ["1"]);
    assert_eq!(expect(&["gauss-components", EXAMPLE], 0), ["1"]);
}

#[test]
fn word_subcommands() {
    assert_eq!(expect(&["reduce", "-n", "3", "s1 g2 g2 s1 r2"], 0), ["r2"]);
    assert_eq!(expect(&["reduce", "-n", "2", "s1 s1"], 0), [""]);
    assert_eq!(expect(&["perm", "-n", "3", "r1 s2"], 0), ["3 1 2"]);
    assert_eq!(expect(&["abelian", "-n", "3", "r1 s2 g1"], 0), ["1 1 1"]);
    assert_eq!(expect(&["flip", "-n", "3", "s1 g3"], 0), ["s2 g1"]);
    assert_eq!(expect(&["eq", "-n", "2", "s1", "r1"], 0), ["distinct"]);
}

#[test]
fn pure_round_trip() {
    let pure = expect(&["pure", "-n", "3", "s1 r1 g2"], 0);
    let back = expect(&["eval-pure", "-n", "3", &pure[0]], 0);
    assert_eq!(
        expect(&["eq", "-n", "3", &back[0], "s1 r1 g2"], 0),
        ["equal"]
    );
    expect(&["pure", "-n", "2", "s1"], 1);
}

#[test]
fn normal_form_output_reparses() {
    let nf = expect(&["nf", "-n", "3", "s1 r2 g3 s2"], 0);
    let parsed = tvt_core::normalform::NormalForm::parse(&nf[0]).unwrap();
    let w = tvt_core::Word::parse("s1 r2 g3 s2", 3).unwrap();
    assert!(tvt_core::normalform::words_equal(&parsed.to_word(), &w).unwrap());
}

#[test]
fn oracle_verdicts_and_exit_codes() {
    let out = expect(
        &[
            "oracle-eq",
            "-n",
            "2",
            "r1 s1 r1",
            "g2 g1 s1 g1 g2",
            "--witness",
        ],
        0,
    );
    assert_eq!(out[0], "equal");
    assert!(out.len() > 1);
    for line in &out[1..] {
        line.parse::<tvt_core::oracle::RewriteStep>().unwrap();
    }
    let out = expect(&["oracle-eq", "-n", "2", "s1", "r1", "--witness"], 0);
    assert_eq!(out[0], "distinct");
    assert_eq!(out.len(), 2);
    assert_eq!(
        expect(
            &["oracle-eq", "-n", "3", "s1 s2", "s2 s1", "--budget", "0"],
            2
        ),
        ["unknown"]
    );
}

#[test]
fn closure_and_braid() {
    let json = expect(&["closure", "-n", "2", "s1 g1"], 0).join("\n");
    let file = tmp_file("closure.gauss", &json);
    assert_eq!(expect(&["bar-parity", &file], 0), ["1"]);
    assert_eq!(expect(&["gauss-components", &file], 0), ["1"]);
    let braid = expect(&["braid", EXAMPLE], 0);
    let n: usize = braid[0].parse().unwrap();
    let w = tvt_core::Word::parse(&braid[1], n).unwrap();
    let example =
        tvt_core::doodle::GaussData::from_json(&std::fs::read_to_string(EXAMPLE).unwrap()).unwrap();
    assert!(
        tvt_core::doodle::same_gauss_data(&tvt_core::doodle::closure_gauss(&w), &example).is_some()
    );
}

#[test]
fn gauss_from_standard_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tvt"))
        .args(["bar-parity", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(std::fs::read(EXAMPLE).unwrap().as_slice())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1\n");
}

#[test]
fn gauss_equivalence() {
    let a = tmp_file(
        "a.gauss",
        &expect(&["closure", "-n", "2", "s1 s1 g1"], 0).join("\n"),
    );
    let b = tmp_file(
        "b.gauss",
        &expect(&["closure", "-n", "2", "g1"], 0).join("\n"),
    );
    let c = tmp_file(
        "c.gauss",
        &expect(&["closure", "-n", "2", "g1 g2"], 0).join("\n"),
    );
    let out = expect(&["gauss-eq", &a, &b, "--witness"], 0);
    assert_eq!(out[0], "equivalent");
    let moves: Vec<tvt_core::doodle::MoveSpec> =
        out[1..].iter().map(|l| l.parse().unwrap()).collect();
    assert!(!moves.is_empty());
    assert_eq!(expect(&["gauss-eq", &a, &c], 0), ["distinct"]);
}

#[test]
fn markov_equivalence() {
    let out = expect(
        &["markov-eq", "-n", "2", "s1", "", "--n2", "1", "--witness"],
        0,
    );
    assert_eq!(out[0], "equivalent");
    let moves: Vec<tvt_core::markov::MarkovMove> =
        out[1..].iter().map(|l| l.parse().unwrap()).collect();
    let w = tvt_core::Word::parse("s1", 2).unwrap();
    assert_eq!(
        tvt_core::markov::replay_markov(&w, &moves).unwrap(),
        tvt_core::Word::identity(1)
    );
    assert_eq!(
        expect(&["markov-eq", "-n", "2", "s1", "g1"], 0),
        ["distinct"]
    );
    assert_eq!(
        expect(&["markov-eq", "-n", "2", "s1 s1", "", "--budget", "0"], 0),
        ["equivalent"],
        "equal words need no search"
    );
}

#[test]
fn usage_and_parse_errors_exit_one() {
    for args in [
        vec!["frobnicate"],
        vec![],
        vec!["reduce", "s1"],
        vec!["reduce", "-n", "2", "s2"],
        vec!["reduce", "-n", "2", "x1"],
        vec!["eq", "-n", "2", "s1"],
        vec!["nabla", "-n", "0"],
        vec!["bar-parity", "/nonexistent/file.gauss"],
        vec!["oracle-eq", "-n", "2", "s1", "s1", "--format", "json"],
    ] {
        let out = tvt(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let bad = tmp_file(
        "bad.gauss",
        "{\"components\": 1, \"arcs\": [[\"c1.3\", \"c1.1\"]]}",
    );
    assert_eq!(tvt(&["gauss-components", &bad]).status.code(), Some(1));
    assert!(!expect(&["--help"], 0).is_empty());
}
