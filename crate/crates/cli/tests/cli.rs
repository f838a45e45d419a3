use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirac-pairings")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn gram(v: &Value) -> Vec<Vec<i64>> {
    serde_json::from_value(v["results"]["gram"].clone()).expect("integer gram")
}

fn scaled_identity(n: usize, c: i64) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { c } else { 0 }).collect()).collect()
}

#[test]
fn sl2_discrete_series_gram_is_identity() {
    let v = json(&["pair", "dirac", "--group", "sl2R", "--ds", "1..3"]);
    assert_eq!(gram(&v), scaled_identity(6, 1));
    assert_eq!(v["tool"], "dirac-pairings");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn sl2_finite_dimensional_ep_gram_is_twice_identity() {
    let v = json(&["pair", "ep", "--group", "sl2R", "--findim", "0..4"]);
    assert_eq!(gram(&v), scaled_identity(5, 2));
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn elliptic_matches_dirac_on_sp4() {
    let v = json(&["pair", "elliptic", "--group", "sp4R", "--ds", "1"]);
    let n = v["results"]["labels"].as_array().unwrap().len();
    assert_eq!(n, 4);
    assert_eq!(v["results"]["gram_dirac"], serde_json::to_value(scaled_identity(n, 1)).unwrap());
}

#[test]
fn fredholm_suites_pass() {
    let out = run(&["fredholm", "check", "--suite", "definition,euler", "--seed", "7", "--instances", "20"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["suites"].as_array().unwrap().len(), 2);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["pair", "ep", "--ds", "1..2"][..],
        &["pair", "dirac", "--ds", "3..1"],
        &["fredholm", "check", "--suite", "nonsense"],
        &["lab", "identities", "--group", "sp4R"],
        &["root-data", "show", "--group", "nope"],
        &["no-such-command"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn missing_datum_file_is_reported() {
    let out = run(&["root-data", "show", "--datum", "/nonexistent/datum.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot load root datum"));
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("dirac-pairings-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.csv");
    let args = ["lab", "conjecture", "--group", "sl2R", "--max", "2", "--format", "csv"];
    let stdout = run(&args).stdout;
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    assert!(run(&with_file).status.success());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
    let text = String::from_utf8(stdout).unwrap();
    assert!(text.starts_with("x,y,ep,euler,ind_d,ind_D,dirac,equal\n"));
    assert!(text.contains("F2,F2,2,2,2,2,2,true"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn user_supplied_module_joins_the_lab_run() {
    let dir = std::env::temp_dir().join(format!("dirac-pairings-mod-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("adjoint.json");
    // The adjoint representation of sl(2) in the weight basis (e, h, f).
    let module = r#"{
        "dimension": 3,
        "weights": [[2], [0], [-2]],
        "actions": {
            "h": [["2","0","0"],["0","0","0"],["0","0","-2"]],
            "e": [["0","-2","0"],["0","0","1"],["0","0","0"]],
            "f": [["0","0","0"],["-1","0","0"],["0","2","0"]]
        },
        "infinitesimal_character": [3]
    }"#;
    std::fs::write(&path, module).unwrap();
    let v = json(&["lab", "conjecture", "--group", "sl2R", "--max", "2", "--module", path.to_str().unwrap()]);
    let rows = v["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 16);
    let diag = rows.iter().find(|r| r["x"] == "adjoint" && r["y"] == "adjoint").unwrap();
    assert_eq!(diag["euler"], 2);
    let with_f2 = rows.iter().find(|r| r["x"] == "adjoint" && r["y"] == "F2").unwrap();
    assert_eq!(with_f2["euler"], 2);

    std::fs::write(&path, module.replace("\"-2\"]]", "\"-3\"]]")).unwrap();
    let out = run(&["lab", "identities", "--group", "sl2R", "--max", "1", "--module", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot load module"));
    std::fs::remove_dir_all(&dir).unwrap();
}
