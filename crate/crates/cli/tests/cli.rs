use std::process::{Command, Output};

use serde_json::Value;

fn latgrowth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latgrowth")).args(args).env_remove("LATGROWTH_THREADS").output().expect("runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = latgrowth(args);
    assert!(o.status.success(), "{args:?} failed: {}", stderr(&o));
    serde_json::from_slice(&o.stdout).expect("valid json")
}

fn degrees_of(v: &Value) -> Vec<Vec<u64>> {
    serde_json::from_value(v["degrees"].clone()).unwrap()
}

#[test]
fn list_shows_builtins_and_rule_file() {
    let o = latgrowth(&["list"]);
    assert!(o.status.success());
    let names: Vec<String> = stdout(&o).lines().map(|l| l.split_whitespace().next().unwrap().to_string()).collect();
    assert_eq!(names, ["kdv", "pkdv", "mkdv", "sine_gordon", "liouville", "burgers"]);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lin.rule");
    std::fs::write(&path, "name = lin\nstencil = quad\nrule = \"x10 + x01 - x00\"\n").unwrap();
    let v = json(&["list", "--json", "--rule-file", path.to_str().unwrap()]);
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 7);
    assert_eq!(entries[6]["name"], "lin");
    assert_eq!(entries[6]["builtin"], false);
}

#[test]
fn kdv_table() {
    let v = json(&["degrees", "--rule", "kdv", "--init", "corner", "--coeff", "constant", "--region", "4x6", "--output", "json"]);
    assert_eq!(
        degrees_of(&v),
        vec![vec![1, 1, 1, 1, 1, 1], vec![1, 3, 5, 7, 9, 11], vec![1, 5, 13, 19, 25, 31], vec![1, 7, 19, 31, 41, 51]]
    );
    assert_eq!(v["region"], serde_json::json!([4, 6]));
}

#[test]
fn pkdv_staircase_diagonals() {
    let v = json(&["degrees", "--rule", "pkdv", "--init", "staircase", "--region", "5x5", "--backend", "specialized", "--output", "json"]);
    let d = degrees_of(&v);
    let by_diagonal: Vec<u64> = (0..9).map(|s| d[s.min(4)][s - s.min(4)]).collect();
    assert_eq!(by_diagonal, [1, 1, 2, 4, 7, 11, 16, 22, 29]);
}

#[test]
fn burgers_generic_rows_double() {
    let o = latgrowth(&["degrees", "--rule", "burgers", "--coeff", "generic-random", "--seed", "7", "--region", "5x4", "--output", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let firsts: Vec<&str> = text.lines().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(firsts, ["1", "2", "4", "8", "16"]);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let path = path.to_str().unwrap();
    let args = ["degrees", "--rule", "pkdv", "--region", "3x3", "--output", "csv"];
    let direct = stdout(&latgrowth(&args));
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path]);
    let o = latgrowth(&with_out);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(path).unwrap(), direct);
}

#[test]
fn analyze_reports_fit_and_class() {
    let v = json(&["analyze", "--rule", "kdv", "--region", "4x6", "--output", "json"]);
    assert_eq!(v["fit"]["formula"], "4*m*n - 2*max(m,n) + 1");
    assert_eq!(v["interpretation"], "ISTIntegrable");
    let v = json(&["analyze", "--rule", "liouville", "--region", "5x5", "--output", "json"]);
    assert_eq!(v["fit"]["formula"], "m + n");
    assert_eq!(v["class"], "Linear");
    assert_eq!(v["interpretation"], "Linearisable");
}

#[test]
fn analyze_mkdv_generic_writes_entropy_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("entropy.csv");
    let v = json(&[
        "analyze",
        "--rule",
        "mkdv",
        "--coeff",
        "generic-symbolic",
        "--backend",
        "specialized",
        "--region",
        "7x7",
        "--output",
        "json",
        "--entropy-csv",
        csv.to_str().unwrap(),
    ]);
    let r = &v["recursion"];
    let coeffs: Vec<i64> = ["a", "b", "c", "e"].iter().map(|k| r[*k].as_i64().unwrap()).collect();
    assert_eq!(coeffs, [1, 1, 1, -1]);
    let ratio = v["entropy"]["ratio"].as_f64().unwrap();
    assert!((ratio - (1.0 + 2f64.sqrt())).abs() / (1.0 + 2f64.sqrt()) < 0.05, "ratio {ratio}");
    let text = std::fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().next(), Some("k,d_kk,log_d_over_2k"));
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn deauto_derive_pkdv() {
    let v = json(&["deauto", "derive", "--rule", "pkdv", "--output", "json"]);
    assert_eq!(v["constraint"], "z11 - z10 - z01 + z00");
    assert_eq!(v["cell"], serde_json::json!([2, 2]));
    assert_eq!(v["family"], "sum");
    assert_eq!(v["verified"], true);
}

#[test]
fn deauto_checks_pass() {
    let o = latgrowth(&["deauto", "verify", "--rule", "sine_gordon", "--coeff", "product", "--seeds", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("sine_gordon product on 4x4: pass"));
    let v = json(&["deauto", "linearize", "--mode", "general", "--seeds", "3", "--output", "json"]);
    assert_eq!(v["pass"], true);
    let v = json(&["deauto", "linearize", "--mode", "simple", "--unit-f", "--output", "json"]);
    assert_eq!(v["pass"], true);
    let v = json(&["deauto", "gauge", "--output", "json"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["trials"].as_array().unwrap().len(), 3);
}

#[test]
fn wrong_family_fails_verification() {
    let v = json(&["deauto", "verify", "--rule", "sine_gordon", "--coeff", "sum", "--output", "json"]);
    assert_eq!(v["pass"], false);
}

#[test]
fn identical_config_gives_identical_output() {
    let args = ["degrees", "--rule", "mkdv", "--coeff", "generic-random", "--seed", "11", "--backend", "specialized", "--region", "5x5", "--output", "json"];
    let a = latgrowth(&args);
    let b = latgrowth(&args);
    let mut single = vec!["--threads", "1"];
    single.extend(args);
    let c = latgrowth(&single);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn usage_errors_exit_one_with_prefix() {
    for args in [
        vec!["degrees", "--rule", "nope"],
        vec!["degrees", "--rule", "kdv", "--region", "0x3"],
        vec!["degrees", "--rule", "kdv", "--init", "diagonal"],
        vec!["degrees", "--rule", "burgers", "--init", "corner"],
        vec!["degrees"],
        vec!["frobnicate"],
        vec!["analyze", "--rule", "kdv", "--region", "2x2"],
    ] {
        let o = latgrowth(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let err = stderr(&o);
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("error[usage]: "), "{args:?}: {err}");
    }
}

#[test]
fn bad_rule_file_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.rule");
    std::fs::write(&path, "name = bad\nstencil = quad\nrule = \"x00 + \"\n").unwrap();
    let o = latgrowth(&["degrees", "--rule-file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[usage]: "));
}

#[test]
fn computation_errors_exit_two() {
    let o = latgrowth(&["deauto", "derive", "--rule", "kdv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[computation]: "));
}

#[test]
fn help_and_version_exit_zero() {
    assert!(latgrowth(&["--help"]).status.success());
    assert!(latgrowth(&["--version"]).status.success());
    assert!(latgrowth(&["deauto", "derive", "--help"]).status.success());
}
