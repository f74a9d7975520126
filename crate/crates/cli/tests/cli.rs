use std::process::{Command, Output};

use serde_json::Value;
use vbracket::bracket::{VirasoroExpression, VirasoroWord};
use vbracket::Q;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vbracket"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("vbracket-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn dims_tables() {
    let out = run(&["dims", "--lattice", "E8", "--max-weight", "1"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["dims"], serde_json::json!([1, 248]));
    let out = run(&["dims", "--lattice", "E8x3", "--max-weight", "1"]);
    assert_eq!(json(&out)["dims"], serde_json::json!([1, 744]));
    let out = run(&["dims", "--lattice", "II11"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("E_UNSUPPORTED"));
}

#[test]
fn bracket_rejects_alpha_in_f_perp() {
    let out = run(&[
        "bracket", "--alpha", "0,1", "--beta", "1,0", "--v", "vac", "--w", "vac",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(
        err.contains("E_HYPOTHESIS") && err.contains("alpha in f-perp"),
        "{err}"
    );
}

#[test]
fn bracket_below_weight_zero_is_the_zero_vector() {
    let out = run(&[
        "bracket", "--alpha", "1,1", "--beta", "1,1", "--v", "vac", "--w", "vac",
    ]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["weight"], -3);
    assert_eq!(doc["value"], serde_json::json!({}));
}

#[test]
fn bracket_output_is_deterministic_and_exact() {
    let v = "e[0,1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]";
    let w = "b[3](-1)e[0,0,1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0] - 1/2*b[5](-2)vac";
    let args = [
        "bracket", "--alpha", "1,0", "--beta", "1,-1", "--v", v, "--w", w,
    ];
    let first = run(&args);
    assert!(first.status.success(), "{}", stderr(&first));
    assert_eq!(first.stdout, run(&args).stdout);
    let doc = json(&first);
    assert_eq!(doc["weight"], 3);
    let value = doc["value"].as_object().unwrap();
    assert!(!value.is_empty());
    for c in value.values() {
        c.as_str().unwrap().parse::<Q>().unwrap();
    }
    let mut oracle_args = args.to_vec();
    oracle_args.push("--oracle");
    let oracle = json(&run(&oracle_args));
    assert_eq!(oracle["value"], doc["value"]);
}

fn expression(terms: &Value) -> VirasoroExpression {
    let mut out = VirasoroExpression::zero();
    for t in terms.as_array().unwrap() {
        let w: VirasoroWord = t["word"].as_str().unwrap().parse().unwrap();
        let c: Q = t["coeff"].as_str().unwrap().parse().unwrap();
        out.add_scaled(&VirasoroExpression::word(w, c), &Q::from(1));
    }
    out
}

#[test]
fn expand_text_round_trips_through_json() {
    let base = ["expand", "--alpha", "1,-1", "--beta", "1,-1", "--primary"];
    let doc = json(&run(&base));
    let terms = doc["terms"].as_array().unwrap();
    let ps: Vec<i64> = terms
        .iter()
        .map(|t| t["p_index"].as_i64().unwrap())
        .collect();
    assert_eq!(ps, vec![0, 1, 2, 3, 4, 5]);
    let rebuilt: Vec<String> = terms
        .iter()
        .map(|t| {
            format!(
                "p_{} = [{}] applied to ([{}] v)_({}) ([{}] w)",
                t["p_index"],
                expression(&t["outer"]),
                expression(&t["left"]),
                t["k"],
                expression(&t["right"])
            )
        })
        .collect();
    let mut text_args = base.to_vec();
    text_args.extend(["--format", "text"]);
    let text = String::from_utf8(run(&text_args).stdout).unwrap();
    assert_eq!(text.lines().collect::<Vec<_>>(), rebuilt);

    let zero = json(&run(&["expand", "--alpha", "1,1", "--beta", "1,-1"]));
    assert!(zero["terms"]
        .as_array()
        .unwrap()
        .iter()
        .all(|t| t["n1"] == 0));
}

#[test]
fn verify_reports_a_corrupted_coefficient() {
    let v = "e[0,1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]";
    let w = "e[0,0,1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]";
    let out = run(&[
        "bracket", "--alpha", "1,0", "--beta", "1,0", "--v", v, "--w", w, "--format", "text",
    ]);
    let value = String::from_utf8(out.stdout).unwrap();
    let value = value.lines().nth(1).unwrap().to_string();
    assert_ne!(value, "0");
    let case = |expected: &str| {
        serde_json::json!({
            "lattice": "E8x3",
            "cases": [{
                "name": "roots",
                "alpha": [1, 0],
                "beta": [1, 0],
                "v": v,
                "w": w,
                "expected": expected,
            }]
        })
        .to_string()
    };
    let good = temp_file("good.json", &case(&value));
    let out = run(&["verify", "--suite", good.to_str().unwrap(), "--no-checks"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );

    let bad = temp_file("bad.json", &case(&format!("{value} + b[7](-1)vac")));
    let out = run(&[
        "verify",
        "--suite",
        bad.to_str().unwrap(),
        "--no-checks",
        "--format",
        "text",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("FAIL roots") && text.contains("formula-expected"),
        "{text}"
    );
}

#[test]
fn verify_empty_suite_passes_with_warning() {
    let path = temp_file("empty.json", r#"{"lattice": "E8x3", "cases": []}"#);
    let out = run(&["verify", "--suite", path.to_str().unwrap(), "--no-checks"]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("warning"));
    let out = run(&["verify", "--suite", "/nonexistent/suite.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("E_IO"));
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest", "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn usage_errors_exit_with_2() {
    assert_eq!(run(&["bracket", "--alpha", "1"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    let out = run(&[
        "bracket", "--alpha", "1,-1", "--beta", "1,-1", "--v", "e[1,2", "--w", "vac",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("E_PARSE"));
}
