use std::process::{Command, Output};

use serde_json::Value;

fn onebit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_onebit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn chsh_optimal_reports_violation_with_error_bar() {
    let out = onebit(&["chsh", "--seed", "7", "--trials", "100000", "--angles-optimal"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["config"]["seed"], 7);
    let s = doc["results"]["stats"]["s_value"].as_f64().unwrap();
    let se = doc["results"]["stats"]["std_error"].as_f64().unwrap();
    assert!((s - 2.0 * 2f64.sqrt()).abs() <= 4.0 * se);
    assert!(!out.stderr.is_empty());
}

#[test]
fn epr_from_propositions() {
    let out = onebit(&["state-from-props", "--props", "ZZ=-1,YY=+1"]);
    assert!(out.status.success());
    let r = &json(&out)["results"];
    assert_eq!(r["classification_label"], "joint, entangled");
    let amps = r["amplitudes"].as_array().unwrap();
    assert_eq!(amps.len(), 2);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for (a, basis) in amps.iter().zip(["01", "10"]) {
        assert_eq!(a["basis"], basis);
        assert!((a["re"].as_f64().unwrap() - h).abs() < 1e-10);
        assert!(a["im"].as_f64().unwrap().abs() < 1e-10);
    }
}

#[test]
fn teleport_min_fidelity_and_histogram() {
    let out = onebit(&["teleport", "--seed", "1", "--trials", "1000"]);
    assert!(out.status.success());
    let r = &json(&out)["results"];
    assert!(r["min_fidelity"].as_f64().unwrap() >= 1.0 - 1e-10);
    let hist: u64 = r["outcome_histogram"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(hist, 1000);
}

#[test]
fn inconsistent_propositions_exit_3() {
    let out = onebit(&["state-from-props", "--props", "ZZ=-1,XI=+1"]);
    assert_eq!(out.status.code(), Some(3));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("do not commute"), "{msg}");
}

#[test]
fn config_errors_exit_2() {
    assert_eq!(onebit(&["qrng", "--trials", "10"]).status.code(), Some(2));
    assert_eq!(onebit(&["qrng", "--seed", "1", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(onebit(&["qkd", "--seed", "1", "--trials", "20"]).status.code(), Some(2));
    assert_eq!(onebit(&["measure", "--seed", "1", "--trials", "5", "--polar", "270"]).status.code(), Some(2));
}

#[test]
fn identical_config_gives_identical_bytes() {
    let a = onebit(&["qkd", "--seed", "5", "--trials", "2000", "--channel", "intercept-resend"]);
    let b = onebit(&["qkd", "--seed", "5", "--trials", "2000", "--channel", "intercept-resend"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = onebit(&["qkd", "--seed", "6", "--trials", "2000", "--channel", "intercept-resend"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn jobs_do_not_change_output() {
    let args = ["chsh", "--seed", "3", "--trials", "20000", "--state", "singlet"];
    let one = onebit(&args);
    let mut many: Vec<&str> = args.to_vec();
    many.extend(["--jobs", "4"]);
    assert_eq!(one.stdout, onebit(&many).stdout);
}

#[test]
fn config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exp.toml");
    std::fs::write(
        &path,
        "subcommand = \"measure\"\nseed = 9\ntrials = 500\npolar = 60.0\nprep-polar = 90.0\n",
    )
    .unwrap();
    let from_file = onebit(&["run", "--config", path.to_str().unwrap()]);
    let from_flags = onebit(&["measure", "--seed", "9", "--trials", "500", "--polar", "60", "--prep-polar", "90"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, from_flags.stdout);

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "subcommand = \"measure\"\nseed = 9\ntrials = 500\npolar = 60.0\ncolour = 1\n").unwrap();
    assert_eq!(onebit(&["run", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn replay_pass_fail_and_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let doc_path = dir.path().join("doc.json");
    let out = onebit(&["chsh", "--seed", "11", "--trials", "5000"]);
    std::fs::write(&doc_path, &out.stdout).unwrap();
    let pass = onebit(&["replay", doc_path.to_str().unwrap()]);
    assert!(pass.status.success());
    assert_eq!(json(&pass)["verdict"], "pass");

    let mut doc = json(&out);
    let s = doc["results"]["stats"]["s_value"].as_f64().unwrap();
    doc["results"]["stats"]["s_value"] = Value::from(s + 1e-15);
    std::fs::write(&doc_path, serde_json::to_vec(&doc).unwrap()).unwrap();
    let fail = onebit(&["replay", doc_path.to_str().unwrap()]);
    assert_eq!(fail.status.code(), Some(1));
    assert_eq!(json(&fail)["field"], "results.stats.s_value");

    doc["config"].as_object_mut().unwrap().remove("seed");
    std::fs::write(&doc_path, serde_json::to_vec(&doc).unwrap()).unwrap();
    let schema = onebit(&["replay", doc_path.to_str().unwrap()]);
    assert_eq!(schema.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&schema.stderr).contains("schema error"));
}

#[test]
fn qrng_digest_is_reproducible() {
    let a = json(&onebit(&["qrng", "--seed", "42", "--trials", "4096"]));
    let b = json(&onebit(&["qrng", "--seed", "42", "--trials", "4096", "--jobs", "3"]));
    assert_eq!(a["results"]["sha256"], b["results"]["sha256"]);
    assert_eq!(a["results"]["sha256"].as_str().unwrap().len(), 64);
}
