use std::path::PathBuf;
use std::process::{Command, Output};

fn defectlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_defectlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("defectlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn classify_extension_json() {
    let path = temp_file(
        "ext.json",
        r#"{"p": 3, "base": {"kind": "perfect_hull_rational_function"}, "as_rhs": "t^-1"}"#,
    );
    let o = defectlab(&["classify", path.to_str().unwrap(), "--format", "json", "--samples", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "artin_schreier");
    assert_eq!(v["sigma_e"], ">0");
    assert_eq!(v["coherent"], true);
    assert_eq!(v["ledger"]["agree"], true);
}

#[test]
fn same_seed_same_bytes() {
    let args = ["examples", "run", "abhyankar_p2", "--format", "json", "--samples", "40", "--seed", "3"];
    let a = defectlab(&args);
    let b = defectlab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn inconclusive_exits_two() {
    let path = temp_file(
        "inconclusive.json",
        r#"{"p": 2, "base": {"kind": "perfect_hull_rational_function"}, "as_rhs": "t^-1 + t^-3/4"}"#,
    );
    let o = defectlab(&["classify", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stderr(&o).contains("inconclusive"));
}

#[test]
fn rhs_without_defect_is_an_error() {
    let path = temp_file(
        "split.json",
        r#"{"p": 2, "base": {"kind": "perfect_hull_rational_function"}, "as_rhs": "t^-1 + t^-1/2"}"#,
    );
    let o = defectlab(&["classify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn malformed_json_reports_position() {
    let path = temp_file("broken.json", "{\n  \"p\": 2,\n  \"as_rhs\": t^-1\n}\n");
    let o = defectlab(&["classify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("broken.json"), "{err}");
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn missing_file() {
    let o = defectlab(&["classify", "/nonexistent/spec.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/nonexistent/spec.json"));
}

#[test]
fn group_expressions() {
    let cases: [(&[&str], &str); 4] = [
        (&["group", "lemma_sd", "Q", ">0", "2"], "matches Δ={0}"),
        (&["group", "power", ">=1", "3"], ">=3"),
        (&["group", "negate", ">0"], "<0"),
        (&["group", "is_prime", ">H1", "over", "QxZ"], "prime, H=H1"),
    ];
    for (args, expected) in cases {
        let o = defectlab(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        assert_eq!(stdout(&o).trim(), expected, "{args:?}");
    }
    assert_eq!(defectlab(&["group", "frobnicate"]).status.code(), Some(1));
}

#[test]
fn kummer_check_inline() {
    let o = defectlab(&["kummer-check", "--p", "3", "--distance", "<1/2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "kummer");
    assert_eq!(v["sigma_e"], ">0");

    let dep = defectlab(&["kummer-check", "--p", "3", "--distance", "<1/3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&dep)).unwrap();
    assert_eq!(v["sigma_e"], ">1/6");

    let both = defectlab(&["kummer-check", "--p", "3", "--distance", "<1/3", "--a-distance", "<1"]);
    assert_eq!(both.status.code(), Some(1));
}

#[test]
fn examples_listing_and_unknown_name() {
    let o = defectlab(&["examples", "list"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), defectlab::bundled::BUNDLED.len());
    let bad = defectlab(&["examples", "run", "no_such_example"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("no_such_example"));
}

#[test]
fn text_output_lists_selected_conditions() {
    let o = defectlab(&["examples", "run", "synthetic_dependent_cut", "--conditions", "bd"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("sigma_e"), "{text}");
}
