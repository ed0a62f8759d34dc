use serde_json::Value;

use zetafrob_cli::{run_with, EXIT_INPUT, EXIT_OK};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("zetafrob").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = invoke(args);
    assert_eq!(code, EXIT_OK, "stderr: {err}");
    serde_json::from_str(&out).unwrap()
}

fn keys(v: &Value) -> Vec<String> {
    v.as_object().unwrap().keys().cloned().collect()
}

#[test]
fn elliptic_over_f3() {
    let v = json(&["--p", "3", "--n", "1", "--q-poly", "0,1,0,1"]);
    assert_eq!(v["L"], serde_json::json!([3, 0, 1]));
    assert_eq!(v["q"], 3);
    assert_eq!(v["g"], 1);
    assert_eq!(v["d"], 3);
    assert_eq!(v["basis"], "b1");
    assert_eq!(v["strip"], "none");
    assert_eq!(v["oracle_L"], Value::Null);
}

#[test]
fn oracle_flag_reports_match() {
    let v = json(&["--p", "5", "--q-poly", "1,2,0,3,0,1", "--oracle"]);
    assert_eq!(v["match"], true);
    assert_eq!(v["oracle_L"], v["L"]);
}

#[test]
fn key_set_is_stable() {
    let a = json(&["--p", "3", "--q-poly", "0,1,0,1"]);
    let b = json(&["--p", "7", "--q-poly", "1,0,3,0,1", "--basis", "b2", "--oracle"]);
    let want = [
        "L", "p", "n", "q", "g", "d", "basis", "strip", "N1", "N", "nwork", "tail_bound",
        "matrix_min_valuation", "twisted", "timings_ms", "warnings", "oracle_L", "match", "seed",
    ];
    assert_eq!(keys(&a), want);
    assert_eq!(keys(&b), want);
    assert_eq!(keys(&a["timings_ms"]), keys(&b["timings_ms"]));
    assert_eq!(b["strip"], "X-1");
}

#[test]
fn forced_dx_over_y_below_2g_warns() {
    // p = 3 < 2g = 4
    let (code, out, err) = invoke(&["--p", "3", "--q-poly", "1,2,0,0,0,1", "--basis", "b1", "--oracle"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["basis"], "b1");
    assert_eq!(v["match"], true);
    let minval = v["matrix_min_valuation"].as_i64().unwrap();
    assert!(minval < 0);
    let warnings = v["warnings"].as_array().unwrap();
    assert!(warnings.iter().any(|w| w.as_str().unwrap().contains(&minval.to_string())));
    assert!(err.contains("warning"));
}

#[test]
fn extension_field_input() {
    let v = json(&["--p", "3", "--n", "2", "--modulus", "1,0,1", "--q-poly", "0:1,1,0,1", "--oracle"]);
    assert_eq!(v["q"], 9);
    assert_eq!(v["match"], true);
}

#[test]
fn bad_coefficient_points_at_column() {
    let (code, out, err) = invoke(&["--p", "3", "--q-poly", "0,1,5,1"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(out.is_empty());
    assert!(err.contains("column 5"), "{err}");
}

#[test]
fn input_errors_exit_2() {
    // x^3 is not separable
    let (code, _, err) = invoke(&["--p", "3", "--q-poly", "0,0,0,1"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("NotSeparable"), "{err}");
    let (code, _, err) = invoke(&["--p", "3", "--n", "2", "--q-poly", "0,1,0,1"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("--modulus"));
    assert_eq!(invoke(&["--p", "4", "--q-poly", "0,1,0,1"]).0, EXIT_INPUT);
    assert_eq!(invoke(&["--p", "3", "--q-poly", "1,1,1"]).0, EXIT_INPUT);
    assert_eq!(invoke(&["--p", "3"]).0, EXIT_INPUT);
    // reducible modulus
    assert_eq!(invoke(&["--p", "3", "--n", "2", "--modulus", "2,0,1", "--q-poly", "0,1,0,1"]).0, EXIT_INPUT);
}

#[test]
fn json_out_writes_file() {
    let path = std::env::temp_dir().join(format!("zetafrob-cli-{}.json", std::process::id()));
    let (code, out, _) =
        invoke(&["--p", "7", "--q-poly", "0,1,0,1", "--json-out", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(v["L"], serde_json::json!([7, 0, 1]));
}

#[test]
fn timing_goes_to_stderr() {
    let (code, _, err) = invoke(&["--p", "3", "--q-poly", "0,1,0,1", "--timing"]);
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("ms"));
}

#[test]
fn help_exits_0() {
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("--q-poly"));
}

#[test]
fn binary_runs() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_zetafrob"))
        .args(["--p", "3", "--q-poly", "0,1,0,1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["L"], serde_json::json!([3, 0, 1]));
    let bad = std::process::Command::new(env!("CARGO_BIN_EXE_zetafrob"))
        .args(["--p", "3", "--q-poly", "0,0,0,1"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_INPUT));
}
