use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn dunkl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dunkl")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(format!("{}-{name}", std::process::id()))
}

#[test]
fn commutator_of_z_squared_and_zb() {
    let o = dunkl(&["comm", "z^2", "zb"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "2*i*h1*z");
}

#[test]
fn trace_of_z_zb() {
    let o = dunkl(&["trace", "z*zb"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "i*h1*(1/2) + i*h1*h2");
}

#[test]
fn normal_form_of_reflection_square() {
    let o = dunkl(&["nf", "g*g"]);
    assert_eq!(stdout(&o).trim(), "1");
    let o = dunkl(&["nf", "zb*z"]);
    assert_eq!(stdout(&o).trim(), "-i*h1 + z*zb - 2*i*h1*h2*g");
}

#[test]
fn h2_zero_flag_drops_h2_terms() {
    let o = dunkl(&["--h2-zero", "trace", "z*zb"]);
    assert_eq!(stdout(&o).trim(), "i*h1*(1/2)");
}

#[test]
fn parse_errors_exit_two_with_position() {
    let o = dunkl(&["nf", "z^"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("byte 2"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(dunkl(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(dunkl(&["trace"]).status.code(), Some(2));
    assert_eq!(dunkl(&["--degree", "many", "hh0"]).status.code(), Some(2));
    assert_eq!(dunkl(&["--help"]).status.code(), Some(0));
}

#[test]
fn trace_rejects_odd_input() {
    let o = dunkl(&["trace", "z"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn passing_suites_exit_zero() {
    for suite in ["relations", "trace", "hh0", "roundtrip", "series"] {
        let o = dunkl(&["verify", "--suite", suite, "--degree", "4"]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
    }
}

#[test]
fn suite_all_reports_the_known_failures() {
    let o = dunkl(&["--format", "json", "verify", "--suite", "all", "--degree", "4", "--order", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let failed: Vec<&str> = v["cases"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|id| id.starts_with("euler/") || id.starts_with("chphi/")), "{failed:?}");
}

#[test]
fn wrong_expected_value_is_caught() {
    let path = scratch("mutant.txt");
    fs::write(&path, "comm good | z^2 | zb | 2*i*h1*z\ncomm bad | z^2 | zb | 3*i*h1*z\n").unwrap();
    let o = dunkl(&["verify", "--suite", "relations", "--suite-file", path.to_str().unwrap()]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(1), "{text}");
    assert!(text.contains("ok   relations/good"), "{text}");
    assert!(text.contains("FAIL relations/bad"), "{text}");
    assert_eq!(text.matches("FAIL").count(), 1, "{text}");
}

#[test]
fn malformed_suite_file_is_an_input_error() {
    let path = scratch("broken.txt");
    fs::write(&path, "flip x | z | z\n").unwrap();
    let o = dunkl(&["verify", "--suite", "relations", "--suite-file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

fn without_wall_time(bytes: &[u8]) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_slice(bytes).unwrap();
    let obj = v.as_object_mut().unwrap();
    obj.remove("wall_time_ms");
    obj["config"].as_object_mut().unwrap().remove("jobs");
    v
}

#[test]
fn reports_are_deterministic_across_job_counts() {
    let args =
        |jobs: &'static str| ["--format", "json", "--seed", "7", "--jobs", jobs, "verify", "--suite", "roundtrip"];
    let a = dunkl(&args("1"));
    let b = dunkl(&args("4"));
    assert_eq!(without_wall_time(&a.stdout), without_wall_time(&b.stdout));
    let c = dunkl(&["--format", "json", "--seed", "8", "verify", "--suite", "roundtrip"]);
    assert_ne!(without_wall_time(&a.stdout)["cases"], without_wall_time(&c.stdout)["cases"]);
}

#[test]
fn certificate_round_trip_and_tampering() {
    let o = dunkl(&["certify", "z^3*zb^3 + 2*z^2*zb^4"]);
    assert_eq!(o.status.code(), Some(0));
    let path = scratch("cert.json");
    fs::write(&path, &o.stdout).unwrap();
    let ok = dunkl(&["certify", "--check", path.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));

    let mut cert: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    cert["scalar"][0]["re"] = serde_json::Value::String("17".into());
    let bad_path = scratch("tampered.json");
    fs::write(&bad_path, serde_json::to_vec(&cert).unwrap()).unwrap();
    let bad = dunkl(&["certify", "--check", bad_path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1), "{}", stdout(&bad));

    fs::write(&bad_path, b"{ not json").unwrap();
    assert_eq!(dunkl(&["certify", "--check", bad_path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn certificate_scalar_matches_trace() {
    let o = dunkl(&["--format", "json", "certify", "z^2*zb^2"]);
    let cert: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let t = dunkl(&["trace", "z^2*zb^2"]);
    assert_eq!(cert["scalar_text"].as_str().unwrap(), stdout(&t).trim());
}

#[test]
fn hh0_certifies_every_monomial() {
    let o = dunkl(&["--degree", "6", "hh0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("ok ")).count(), 16);
    assert!(!text.contains("FAIL"));
}

#[test]
fn chphi_starts_with_one_and_the_trace_of_z_zb() {
    let o = dunkl(&["--order", "2", "chphi"]);
    let text = stdout(&o);
    assert!(text.starts_with("(1) + (i*h1*(1/2) + i*h1*h2)*t"), "{text}");
    assert!(text.trim_end().ends_with("O(t^3)"), "{text}");
}

#[test]
fn local_trace_in_one_base_pair() {
    let o = dunkl(&["localtrace", "p1*q1", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = dunkl(&["localtrace", "p1*q1", "--n", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn index_in_dimension_one_is_the_trace_of_one() {
    let o = dunkl(&["index", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!stdout(&o).trim().is_empty());
    assert_eq!(dunkl(&["index", "--n", "0"]).status.code(), Some(2));
}
