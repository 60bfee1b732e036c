use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

fn qgk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgk")).args(args).env_remove("QGK_CAP").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qgk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn check_reports_the_fuzzy_example() {
    let o = qgk(&["check", fixture("fuzzy").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("stable quantal frame: yes"));
    assert!(text.contains("multiplicative: no"));
    assert!(text.contains("inverse quantale: no"));
}

#[test]
fn check_reports_the_quotient() {
    let o = qgk(&["check", fixture("three-point-quotient").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("inverse quantale: yes"));
    assert!(text.contains("  frame: no"));
}

#[test]
fn every_fixture_file_checks() {
    for entry in std::fs::read_dir(fixture("z2").parent().unwrap()).unwrap() {
        let path = entry.unwrap().path();
        let o = qgk(&["check", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}: {}", path.display(), stdout(&o));
    }
}

#[test]
fn truncated_and_garbled_input_exit_2() {
    let text = std::fs::read_to_string(fixture("fuzzy")).unwrap();
    let cut = scratch("truncated.json");
    std::fs::write(&cut, &text[..text.len() / 2]).unwrap();
    let o = qgk(&["check", cut.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));

    let bad = scratch("bad-table.json");
    std::fs::write(&bad, text.replacen("\"mult\"", "\"mult_\"", 1)).unwrap();
    assert_eq!(qgk(&["check", bad.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(qgk(&["check", "/nonexistent/x.json"]).status.code(), Some(2));
    assert_eq!(qgk(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qgk(&["search", "no-such-target"]).status.code(), Some(2));
}

#[test]
fn failed_expectation_exits_1() {
    let text = std::fs::read_to_string(fixture("fuzzy")).unwrap();
    let wrong = scratch("wrong-expectation.json");
    std::fs::write(&wrong, text.replacen("\"multiplicative\": false", "\"multiplicative\": true", 1)).unwrap();
    let o = qgk(&["check", wrong.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("MISMATCH multiplicative"));
}

#[test]
fn json_check_output_parses() {
    let o = qgk(&["--json", "check", fixture("unstable-support").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["kind"], "quantale");
    assert_eq!(v["mismatches"].as_array().unwrap().len(), 0);
}

#[test]
fn build_writes_to_out_and_round_trips() {
    let out = scratch("lvee.json");
    let o = qgk(&["build", "Lvee", "--from", fixture("three-point-pseudogroup").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let o = qgk(&["check", out.to_str().unwrap()]);
    assert!(stdout(&o).contains("quantale with 9 elements"));
}

#[test]
fn build_rejects_the_wrong_kind() {
    let o = qgk(&["build", "P", "--from", fixture("fuzzy").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = qgk(&["build", "quotient", "--from", fixture("fuzzy").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gq_dot_output() {
    let o = qgk(&["build", "GQ", "--dot", "--from", fixture("pz2").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("digraph arrows {"));
    assert_eq!(text.matches("->").count(), 1);
}

#[test]
fn powerset_cap_from_flag_and_environment() {
    let pair3 = fixture("pair3");
    let pair3 = pair3.to_str().unwrap();
    assert_eq!(qgk(&["build", "P", "--from", pair3]).status.code(), Some(0));
    let o = qgk(&["--cap", "8", "build", "P", "--from", pair3]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("9"), "{}", stderr(&o));
    let o = Command::new(env!("CARGO_BIN_EXE_qgk")).args(["build", "P", "--from", pair3]).env("QGK_CAP", "8").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    // the flag wins over the environment
    let o = Command::new(env!("CARGO_BIN_EXE_qgk"))
        .args(["--cap", "9", "build", "P", "--from", pair3])
        .env("QGK_CAP", "8")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn search_cap_is_enforced() {
    let o = qgk(&["search", "inverse-not-frame", "--max", "9"]);
    assert_eq!(o.status.code(), Some(1));
    let o = qgk(&["--cap", "3", "search", "multiplicative-not-inverse", "--max", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let o = qgk(&["search", "multiplicative-not-inverse", "--max", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("found"));
}

#[test]
fn roundtrip_reports_the_epsilon_size_mismatch() {
    let o = qgk(&["roundtrip", fixture("pz2").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = qgk(&["roundtrip", fixture("fuzzy").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("size mismatch 2 vs 4"), "{}", stdout(&o));
}

#[test]
fn corpus_filter_and_corruption() {
    let o = qgk(&["corpus", "--filter", "etale"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = qgk(&["corpus", "--filter", "quantale", "--corrupt", "fuzzy"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("fuzzy"));
    let o = qgk(&["corpus", "--corrupt", "no-such-fixture"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(qgk(&["--help"]).status.code(), Some(0));
    assert_eq!(qgk(&["--version"]).status.code(), Some(0));
}
