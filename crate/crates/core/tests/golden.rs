//! Byte-exact comparison of fixture files and command output against stored copies.
//! Run with `UPDATE_GOLDEN=1` to rewrite them.

use std::path::{Path, PathBuf};

use qgk::{cli, corpus, io};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).to_path_buf()
}

fn fixture(name: &str) -> String {
    root().join("fixtures").join(format!("{name}.json")).display().to_string()
}

fn compare(path: &Path, actual: &str) {
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(expected == actual, "{} differs from the stored copy:\n{actual}", path.display());
}

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["qgk"];
    full.extend_from_slice(args);
    let code = cli::run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn fixture_files_match_the_corpus() {
    for f in corpus::fixtures() {
        let text = io::render_document(&corpus::fixture_document(&f));
        compare(&root().join("fixtures").join(format!("{}.json", f.name)), &text);
    }
}

#[test]
fn build_outputs() {
    let quotient_classes = serde_json::to_string(&corpus::three_point_theta()).unwrap();
    let cases: Vec<(Vec<String>, &str)> = vec![
        (vec!["build".into(), "L".into(), "--from".into(), fixture("three-point-pseudogroup")], "L-three-point.json"),
        (vec!["build".into(), "Lvee".into(), "--from".into(), fixture("three-point-pseudogroup")], "Lvee-three-point.json"),
        (vec!["build".into(), "Lvee".into(), "--from".into(), fixture("I2")], "Lvee-I2.json"),
        (vec!["build".into(), "GQ".into(), "--from".into(), fixture("pz2")], "GQ-pz2.json"),
        (vec!["build".into(), "GQ".into(), "--dot".into(), "--from".into(), fixture("pz2")], "GQ-pz2.dot"),
        (vec!["build".into(), "ipi".into(), "--from".into(), fixture("pz2")], "ipi-pz2.json"),
        (
            vec![
                "build".into(),
                "quotient".into(),
                "--from".into(),
                fixture("three-point-envelope"),
                "--classes".into(),
                quotient_classes,
            ],
            "quotient-three-point.json",
        ),
        (vec!["check".into(), "--json".into(), fixture("fuzzy")], "check-fuzzy.json"),
        (vec!["roundtrip".into(), "--json".into(), fixture("pz2")], "roundtrip-pz2.json"),
        (
            vec!["search".into(), "--json".into(), "stable-not-multiplicative".into(), "--max".into(), "4".into()],
            "search-stable-not-multiplicative-4.json",
        ),
    ];
    for (args, golden) in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, out) = run(&args);
        assert_eq!(code, 0, "{args:?}");
        compare(&root().join("tests").join("golden").join(golden), &out);
        // deterministic
        assert_eq!(run(&args).1, out);
    }
}
