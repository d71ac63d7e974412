use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_synconn"))
}

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    bin().current_dir(root()).args(args).output().expect("binary runs")
}

/// Compares with `tests/golden/NAME`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, actual: &[u8]) {
    let path = root().join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(expected == actual, "{name} differs from golden:\n{}", String::from_utf8_lossy(actual));
}

#[test]
fn analyze_tensor_json_matches_golden() {
    let out = run(&["analyze", "data/corpus.rules", "--connective", "Tensor", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    golden("analyze_tensor.json", &out.stdout);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["connective", "arity", "rules", "doi", "main_cut", "equations", "reflection", "classification", "uniqueness", "equivalence_consistent"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["reflection"]["witness_side"], "left");
}

#[test]
fn fuzz_small_run_matches_golden() {
    let out = run(&["fuzz", "--count", "10", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    golden("fuzz_10_7.txt", &out.stdout);
}

#[test]
fn corpus_text_matches_golden() {
    let out = run(&["corpus"]);
    assert_eq!(out.status.code(), Some(0));
    golden("corpus.txt", &out.stdout);
}

#[test]
fn tonk_text_report_matches_golden() {
    let out = run(&["analyze", "data/corpus.rules", "--connective", "Tonk"]);
    assert_eq!(out.status.code(), Some(0));
    golden("analyze_tonk.txt", &out.stdout);
}

#[test]
fn missing_file_exits_2() {
    let out = run(&["analyze", "missing.rules"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.rules"));
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["fuzz", "--count", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["fuzz", "--count", "3", "--seed", "1", "--max-arity", "9"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["analyze", "data/corpus.rules", "--doi-mode", "bounded"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--max-depth"));
}

#[test]
fn parse_errors_exit_2_with_position() {
    let dir = std::env::temp_dir().join(format!("synconn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("bad.rules");
    std::fs::write(&file, "connective K(A) {\n  right \"k\": [G |- A] => G |- ;\n}\n").unwrap();
    let out = run(&["classify", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":2:"));
}

#[test]
fn unknown_connective_exits_2() {
    let out = run(&["check-cut", "data/corpus.rules", "--connective", "Nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn component_commands_report_failures_as_data() {
    for cmd in ["check-doi", "check-cut", "derive-reflection", "classify"] {
        let out = run(&[cmd, "data/corpus.rules", "--connective", "Tonk", "--format", "json"]);
        assert_eq!(out.status.code(), Some(0), "{cmd}");
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["connective"], "Tonk");
    }
}

#[test]
fn bounded_doi_mode_is_accepted() {
    let out = run(&["check-doi", "data/corpus.rules", "--connective", "With", "--doi-mode", "bounded", "--max-depth", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("derivable (bounded(4)"));
}

#[test]
fn shallow_bounded_search_breaks_the_equivalence_and_exits_1() {
    // identity for tensor needs two rule applications
    let out = run(&["analyze", "data/corpus.rules", "--connective", "Tensor", "--doi-mode", "bounded", "--max-depth", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("equivalence: VIOLATED: (doi and main_cut) <=> reflection"));
    assert!(text.contains("equivalence violations: 1"));
}

#[test]
fn whole_file_json_is_an_array() {
    let out = run(&["analyze", "data/corpus.rules", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 10);
}
