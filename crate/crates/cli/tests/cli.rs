use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperberge")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn write_gen(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let path_str = path.to_str().unwrap().to_string();
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path_str]);
    let out = run(&full);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    path_str
}

#[test]
fn lemma_campaign_passes() {
    let out = run(&["verify", "lemma21", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["pass"], true);
    assert_eq!(report["levels"][0]["nonhamiltonian"], 30);
    assert_eq!(report["levels"][1]["visited"], 210);
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS"));
}

#[test]
fn lemma_campaign_rejects_out_of_range() {
    let out = run(&["verify", "lemma21", "--n", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("5 <= n <= 8"));
}

#[test]
fn edge_campaign_writes_csv() {
    let out = run(&["verify", "edges", "--n", "6", "--r", "4", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,r,m,visited,hamiltonian,nonhamiltonian,exceptions,pass");
    assert_eq!(lines[1], "6,4,5,3003,2997,6,6,PASS");
    assert_eq!(lines[2], "6,4,6,5005,4945,60,60,PASS");
    assert_eq!(lines.len(), 4);
}

#[test]
fn budget_overflow_is_reported() {
    let out = run(&["verify", "edges", "--n", "6", "--r", "3", "--budget", "1000"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("m = 10: 184756") && err.contains("m = 11: 167960"), "{err}");
}

#[test]
fn counts_do_not_depend_on_jobs() {
    let strip = |out: Output| {
        let mut v = stdout_json(&out);
        v.as_object_mut().unwrap().remove("wall_time_secs");
        v.as_object_mut().unwrap().remove("jobs");
        v
    };
    let one = strip(run(&["verify", "edges", "--n", "5", "--r", "3", "--jobs", "1"]));
    let many = strip(run(&["verify", "edges", "--n", "5", "--r", "3", "--jobs", "8"]));
    assert_eq!(one, many);
}

#[test]
fn spectral_campaign_passes() {
    let out = run(&["verify", "spectral", "--n", "6", "--r", "3", "--samples", "500", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["spectral"]["exception_tightness"]["pass"], true);
    assert_eq!(report["spectral"]["equality_case"]["pass"], true);
    assert_eq!(report["spectral"]["random_samples"], 500);
}

#[test]
fn gen_and_check_berge() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_gen(dir.path(), "ke.txt", &["--kind", "clique_plus_pendant", "--n", "6", "--r", "3"]);
    let text = fs::read_to_string(&file).unwrap();
    assert!(text.starts_with("6 3 11\n"));
    assert_eq!(text.lines().count(), 12);

    let out = run(&["check-berge", "--input", &file, "--kind", "cycle"]);
    assert_eq!(out.status.code(), Some(0));
    let verdict = stdout_json(&out);
    assert_eq!(verdict["verdict"], "none");
    assert!(verdict["certificate"].is_null());

    let out = run(&["check-berge", "--input", &file, "--kind", "path"]);
    assert_eq!(stdout_json(&out)["verdict"], "found");
}

#[test]
fn certificates_round_trip_through_check_cert() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_gen(dir.path(), "k5.json", &["--kind", "complete", "--n", "5", "--r", "3", "--format", "json"]);
    let out = run(&["check-berge", "--input", &file]);
    let cert = stdout_json(&out)["certificate"].clone();
    assert_eq!(cert["kind"], "cycle");
    let cert_path = dir.path().join("cert.json");
    fs::write(&cert_path, cert.to_string()).unwrap();
    let out = run(&["check-cert", "--input", &file, "--cert", cert_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["valid"], true);

    let mut bad = cert.clone();
    bad["edges"][1] = bad["edges"][0].clone();
    fs::write(&cert_path, bad.to_string()).unwrap();
    let out = run(&["check-cert", "--input", &file, "--cert", cert_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let body = stdout_json(&out);
    assert_eq!(body["valid"], false);
    assert!(body["violations"].as_array().unwrap().iter().any(|v| v["violation"] == "repeated_edge"));
}

#[test]
fn lambda_and_bound() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_gen(dir.path(), "k5.txt", &["--kind", "complete", "--n", "5", "--r", "3"]);
    let est = stdout_json(&run(&["lambda", "--input", &file]));
    let (lo, hi) = (est["lower"].as_f64().unwrap(), est["upper"].as_f64().unwrap());
    assert!(lo <= 6.0 + 1e-12 && hi >= 6.0 - 1e-12 && hi - lo <= 1e-9);

    let bound = stdout_json(&run(&["bound", "--r", "3", "--m", "10", "--n", "6"]));
    assert!((bound["bai_lu"].as_f64().unwrap() - 6.0).abs() < 1e-9);
    assert_eq!(bound["thresholds"]["edge_cycle"], "10");
    assert_eq!(bound["thresholds"]["spectral_cycle"], "6");

    let from_file = stdout_json(&run(&["bound", "--r", "3", "--input", &file]));
    assert_eq!(from_file["within_bound"], true);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["lambda"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "edges", "--n", "5"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "--kind", "random", "--n", "5", "--r", "3"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "5 3 1\n0 1 9\n").unwrap();
    assert_eq!(run(&["check-berge", "--input", bad.to_str().unwrap()]).status.code(), Some(2));
}
