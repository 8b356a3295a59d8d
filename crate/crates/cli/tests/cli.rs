use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

use rdiagram_cli::output::RDiagramDocument;

const EXAMPLE: &str = r#"{"p": 2, "differentials": [{"d1": [["2"]], "d2": [["0"]]}]}"#;

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn rdiagram(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rdiagram"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_exit_codes() {
    let zero = file(r#"{"p": 3, "differentials": [{"d1": [[0, 0]], "d2": [["0", "0"]]}]}"#);
    let o = rdiagram(&["validate", zero.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");

    let bad = file(r#"{"p": 3, "differentials": [{"d1": [[1, 0]], "d2": [[2, 0]]}]}"#);
    let o = rdiagram(&["validate", bad.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("entry (0, 0)"), "{}", stdout(&o));

    let malformed = file(r#"{"p": 3, "differentials": "#);
    let o = rdiagram(&["validate", malformed.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = rdiagram(&["validate", "/nonexistent/complex.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn composition_failure_is_invalid_math() {
    // (1) then (1): the composite is nonzero
    let doc = file(
        r#"{"p": 2, "differentials": [{"d1": [[1]], "d2": [[1]]}, {"d1": [[1]], "d2": [[1]]}]}"#,
    );
    let path = doc.path().to_str().unwrap();
    assert_eq!(rdiagram(&["validate", path]).status.code(), Some(1));
    assert_eq!(rdiagram(&["rdiagram", path, "--all"]).status.code(), Some(1));
}

#[test]
fn worked_example_json_and_text() {
    let f = file(EXAMPLE);
    let path = f.path().to_str().unwrap();
    let o = rdiagram(&["rdiagram", path, "--degree", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: RDiagramDocument = serde_json::from_str(&stdout(&o)).unwrap();
    let d = &doc.degrees[0];
    assert_eq!(d.k_dim, 0);
    assert_eq!(d.s1.factors, vec!["2"]);
    assert_eq!(d.s1.rank, 0);
    assert_eq!(d.sbar_dim, 1);
    assert_eq!((d.s2.rank, d.s2.factors.len()), (1, 0));
    assert!(d.valid);
    assert_eq!(d.oracle.homology.rank, 1);

    let o = rdiagram(&["rdiagram", path, "--degree", "1", "--format", "text"]);
    let text = stdout(&o);
    for needle in ["K = 0", "S_1 = Z/2", "S_2 = Z", "S_bar = F_2", "q_1 /"] {
        assert!(text.contains(needle), "missing {needle:?} in\n{text}");
    }
}

#[test]
fn zero_complex_gives_r() {
    let f = file(r#"{"p": 5, "differentials": [], "ranks": [1]}"#);
    let o = rdiagram(&["rdiagram", f.path().to_str().unwrap(), "--all"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: RDiagramDocument = serde_json::from_str(&stdout(&o)).unwrap();
    let d = &doc.degrees[0];
    assert_eq!((d.k_dim, d.s1.rank, d.sbar_dim, d.s2.rank), (0, 1, 1, 1));

    let f = file(r#"{"p": 3, "differentials": [], "ranks": [2]}"#);
    let o = rdiagram(&["invariants", f.path().to_str().unwrap(), "--all", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["degrees"][0]["oracle"]["rank"], 4);
    assert_eq!(v["degrees"][0]["agree"], true);
}

#[test]
fn all_degrees_of_three_term_complex() {
    // C^0 = R -> C^1 = R^2 -> C^2 = R, with d^1 d^0 = 0
    let f = file(
        r#"{"p": 3,
            "differentials": [
              {"d1": [["1"], ["-1"]], "d2": [["4"], ["-1"]]},
              {"d1": [["1", "1"]], "d2": [["1", "4"]]}
            ],
            "labels": ["a", "b", "c"]}"#,
    );
    let o = rdiagram(&["rdiagram", f.path().to_str().unwrap(), "--all", "--trace"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: RDiagramDocument = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.degrees.iter().map(|d| d.degree).collect::<Vec<_>>(), vec![0, 1, 2]);
    assert_eq!(doc.degrees[1].label.as_deref(), Some("b"));
    assert!(doc.degrees.iter().all(|d| d.valid && d.oracle.agree));
    assert_eq!(doc.degrees[0].trace.as_ref().unwrap().len(), 4);
}

#[test]
fn output_round_trips_and_is_deterministic() {
    let f = file(
        r#"{"p": 2, "differentials": [{"d1": [[2, 0], [0, 2]], "d2": [[0, 0], [0, 2]]}]}"#,
    );
    let path = f.path().to_str().unwrap();
    let first = stdout(&rdiagram(&["rdiagram", path, "--all"]));
    let second = stdout(&rdiagram(&["rdiagram", path, "--all"]));
    assert_eq!(first, second);

    let emitted = file(&first);
    let o = rdiagram(&["recheck", emitted.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: RDiagramDocument = serde_json::from_str(&first).unwrap();
    let rechecked: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for (d, r) in doc.degrees.iter().zip(rechecked.as_array().unwrap()) {
        assert_eq!(serde_json::to_value(&d.checks).unwrap(), r["checks"]);
    }
}

#[test]
fn tampered_document_fails_recheck() {
    let f = file(EXAMPLE);
    let out = stdout(&rdiagram(&["rdiagram", f.path().to_str().unwrap(), "--degree", "1"]));
    let mut doc: RDiagramDocument = serde_json::from_str(&out).unwrap();
    // kill S_1 but claim the report is unchanged
    doc.degrees[0].s1.relations = vec![vec!["1".into()]];
    doc.degrees[0].p1 = vec![vec!["0".into()]];
    let emitted = file(&serde_json::to_string(&doc).unwrap());
    let o = rdiagram(&["recheck", emitted.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{o:?}");
}

#[test]
fn degree_out_of_range_and_missing_selection() {
    let f = file(EXAMPLE);
    let path = f.path().to_str().unwrap();
    assert_eq!(rdiagram(&["rdiagram", path, "--degree", "5"]).status.code(), Some(1));
    assert_eq!(rdiagram(&["rdiagram", path]).status.code(), Some(2));
}

#[test]
fn selftest_and_p_check() {
    let o = rdiagram(&["selftest", "--seed", "11", "--trials", "10", "--p-check"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("agree with the oracle"));

    let f = file(EXAMPLE);
    let o = rdiagram(&["invariants", f.path().to_str().unwrap(), "--degree", "1", "--p-check"]);
    let text = stdout(&o);
    assert!(text.contains("quotient ring check for p = 2: true"), "{text}");
    assert!(text.contains("H^1: Z (pipeline Z, agree)"), "{text}");
}
