//! Criteria 1–10 end to end through `klein reproduce-paper`.

use std::process::Command;

use serde_json::Value;

#[test]
fn acceptance() {
    let out = Command::new(env!("CARGO_BIN_EXE_klein"))
        .args(["reproduce-paper", "--stable", "--mutations", "10", "--seed", "0"])
        .output()
        .unwrap();
    let cert: Value = serde_json::from_slice(&out.stdout).expect("certificate JSON");
    let criteria = cert["result"]["criteria"].as_array().unwrap();
    let checks = cert["checks"].as_array().unwrap();
    let mut failed = Vec::new();
    for id in 1..=10u64 {
        let c = criteria.iter().find(|c| c["id"] == id);
        let passed = c.is_some_and(|c| c["passed"] == true);
        let title = c.map_or("missing", |c| c["title"].as_str().unwrap());
        println!("criterion {id}: {} ({title})", if passed { "PASS" } else { "FAIL" });
        let prefix = format!("[{id}] ");
        for k in checks.iter().filter(|k| k["name"].as_str().unwrap().starts_with(&prefix) && k["status"] == "failed") {
            println!("    failed: {} = {}", k["name"], k["value"]);
        }
        if !passed {
            failed.push(id);
        }
    }
    for e in cert["result"]["errata"].as_array().unwrap() {
        println!("erratum: {}: {}", e["name"], e["detail"]);
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(cert["status"], "verified");
    // every check carries a claim or "plumbing"
    assert!(checks.iter().all(|k| k["reference"].as_str().is_some_and(|r| !r.is_empty())));
    let statuses = ["verified", "failed", "assumed-from-paper"];
    assert!(checks.iter().all(|k| statuses.contains(&k["status"].as_str().unwrap())));
    assert_eq!(checks.iter().filter(|k| k["name"].as_str().unwrap().starts_with("[10] ")).count(), 10);
}
