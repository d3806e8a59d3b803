use std::process::Command;

use serde_json::Value;

fn klein(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_klein")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, text) = klein(args);
    (code, serde_json::from_str(&text).unwrap_or(Value::Null))
}

#[test]
fn verdict_examples() {
    let (code, v) = json(&["verdict", "e6", "--ext", "12"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["rational"], true);
    assert_eq!(v["result"]["a"], 12);
    assert_eq!(v["status"], "verified");
    let (code, v) = json(&["verdict", "e6", "--ext", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["rational"], false);
    assert_eq!(v["result"]["a"], 12);
    let (code, v) = json(&["verdict", "d5", "--ext", "8"]);
    assert_eq!((code, &v["result"]["rational"]), (0, &Value::Bool(true)));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["curves", "s9"][..],
        &["curves", "s6prime"],
        &["verdict", "e9", "--ext", "2"],
        &["verdict", "e6", "--ext", "0"],
        &["verdict", "e6"],
        &["lattice", "9"],
        &["audit", "s6", "--t", "0"],
        &["audit", "s6", "--t", "x"],
        &["autos", "an", "--poly", "x + y"],
        &["frobnicate"],
    ] {
        assert_eq!(klein(args).0, 2, "{args:?}");
    }
}

#[test]
fn curve_counts() {
    for (s, n) in [("s6", 27), ("s7", 56), ("dn:5", 10), ("an:4", 8)] {
        let (code, v) = json(&["curves", s]);
        assert_eq!(code, 0, "{s}");
        assert_eq!(v["result"]["count"], n);
        assert_eq!(v["result"]["curves"].as_array().unwrap().len(), n);
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "verified" && c["reference"].is_string()));
    }
    let (_, v) = json(&["curves", "s7"]);
    assert_eq!(v["result"]["details"]["Q"], "X^3 - 29496*X^2 + 401808*X - 64");
}

#[test]
fn other_commands() {
    let (code, v) = json(&["lattice", "7"]);
    assert_eq!((code, &v["result"]["count"]), (0, &Value::from(56)));
    assert_eq!(v["result"]["root_system"]["coxeter_number"], 18);
    let (code, v) = json(&["autos", "an", "--n", "3", "--poly", "1+y"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["verified"], true);
    let (code, v) = json(&["autos", "d4"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["tau"]["order"], 3);
    let (code, v) = json(&["autos", "e8"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["diagonal"]["parametrization"]["components"][2], "s^15");
    let (code, v) = json(&["audit", "s6", "--t", "3", "--tol", "1e-8"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["count"], 27);
    assert!(v["result"]["degrees"].as_array().unwrap().iter().all(|d| d == 10));
    let (code, v) = json(&["verdict-grid", "--cases", "e6,d5,a3", "--max-m", "12"]);
    assert_eq!(code, 0);
    let cells = v["result"]["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 36);
    assert!(cells.iter().all(|c| c["rational"] == c["divides"]));
}

#[test]
fn output_is_byte_identical() {
    for args in [&["curves", "s7", "--stable"][..], &["verdict-grid", "--stable"], &["lattice", "8", "--stable"]] {
        let (_, a) = klein(args);
        let (_, b) = klein(args);
        assert_eq!(a, b, "{args:?}");
        let mut seq = args.to_vec();
        seq.push("--sequential");
        assert_eq!(a, klein(&seq).1, "{args:?} sequential");
    }
    let (_, v) = json(&["lattice", "6"]);
    assert!(v["elapsed_ms"].is_u64());
    let (_, v) = json(&["lattice", "6", "--stable"]);
    assert!(v.get("elapsed_ms").is_none());
}

#[test]
fn out_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("klein-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, text) = klein(&["verdict", "e7", "--ext", "18", "--stable", "--out", p]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn injected_faults_exit_1() {
    for seed in [5, 11] {
        let (code, v) = json(&["reproduce-paper", "--inject-fault", &seed.to_string(), "--stable"]);
        assert_eq!(code, 1, "seed {seed}: {}", v["result"]["injected"]);
        assert_eq!(v["status"], "failed");
        assert!(v["checks"].as_array().unwrap().iter().any(|c| c["status"] == "failed"));
    }
}
