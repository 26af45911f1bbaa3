use std::process::{Command, Output};

use serde_json::Value;

fn pil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pil")).args(args).env_remove("PIL_THREADS").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn c1_sweep_peaks_at_the_known_constant() {
    let out = pil(&["optimize", "c1", "--lambda-sweep", "0.5:2.0:0.001", "--mode", "unconditional", "--json"]);
    let v = json(&out);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 1500);
    assert_eq!(v["meta"]["params"]["skipped"], 1);
    let best = results.iter().map(|r| r["value"].as_f64().unwrap()).fold(f64::MIN, f64::max);
    assert!((best - 0.01266456).abs() < 1e-5, "{best}");
    assert!(results.iter().all(|r| r["kind"] == "search_point" && r["objective"] == "c1"));
}

#[test]
fn singular_series_at_three_is_twice_the_twin_constant() {
    let s = json(&pil(&["constants", "singular-series", "--n", "3", "--json"]));
    let c = json(&pil(&["constants", "twin-constant", "--json"]));
    let s = s["results"][0]["value"].as_f64().unwrap();
    let c = c["results"][0]["value"].as_f64().unwrap();
    assert!((s - 2.0 * c).abs() < 1e-11, "{s} vs {c}");
    assert!((c - 1.3203236).abs() < 1e-6);
}

#[test]
fn verify_writes_a_named_report_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = pil(&["verify", "all", "--limit", "1e5", "--B", "3.454", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let results = v["results"].as_array().unwrap();
    assert!(results.len() > 20);
    for r in results {
        assert!(r["name"].is_string() && r.get("margin").is_some(), "{r}");
    }
    assert_eq!(v["meta"]["params"]["X"], 100000);

    // the report command re-emits it byte for byte
    let again = pil(&["report", "--input", path.to_str().unwrap(), "--json"]);
    assert!(again.status.success());
    assert_eq!(String::from_utf8(again.stdout).unwrap(), text);
}

#[test]
fn hard_failure_exits_one_but_conjectural_failure_does_not() {
    // B = 1 is below every proven value; the check fails but only as a conjecture
    let out = pil(&["verify", "bd-upper", "--limit", "1e5", "--B", "1", "--json"]);
    let v = json(&out);
    let r = &v["results"][0];
    assert_eq!((r["status"].as_str(), r["pass"].as_bool()), (Some("conjectural"), Some(false)));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let report = r#"{"meta":{"params":{},"version":"0"},"results":[{"kind":"check","name":"x","pass":false,"status":"hard"}]}"#;
    std::fs::write(&path, report).unwrap();
    let out = pil(&["report", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_and_precondition_errors_exit_two() {
    let out = pil(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(pil(&["optimize", "c1", "--lambda", "0.4"]).status.code(), Some(2));
    assert_eq!(pil(&["constants", "thm5", "--lambda", "0.579039"]).status.code(), Some(2));
    assert_eq!(pil(&["sieve", "--limit", "1.5"]).status.code(), Some(2));
}

#[test]
fn sieve_cache_round_trip_and_formats() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("primes.bin");
    let cache = cache.to_str().unwrap();
    let first = json(&pil(&["sieve", "--limit", "1e4", "--cache", cache, "--twin", "1,2", "--json"]));
    assert!(std::path::Path::new(cache).exists());
    let second = json(&pil(&["sieve", "--limit", "1e4", "--cache", cache, "--twin", "1,2", "--json"]));
    assert_eq!(first, second);
    assert_eq!(first["results"][0]["pi"], 1229);
    assert_eq!(first["results"][1]["Z1"], 205);
    assert_eq!(pil(&["sieve", "--limit", "2e4", "--cache", cache]).status.code(), Some(2));

    let csv = pil(&["sieve", "--limit", "100", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.lines().next().unwrap().contains("pi"));
    let plain = pil(&["sieve", "--limit", "100", "--psi", "10"]);
    let text = String::from_utf8(plain.stdout).unwrap();
    assert!(text.contains("pi=25"), "{text}");
}

#[test]
fn thread_count_does_not_change_results() {
    let args = ["optimize", "lambda-star", "--ell-min", "10", "--ell-max", "13", "--json"];
    let one = Command::new(env!("CARGO_BIN_EXE_pil")).args(args).env("PIL_THREADS", "1").output().unwrap();
    let many = pil(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(json(&one), json(&many));
    let v = json(&one);
    assert!(v["results"][0]["value"].as_f64().unwrap() >= 1.145358 - 1e-6);
}

#[test]
fn k_tuple_constants() {
    let v = json(&pil(&["optimize", "c2", "--lambda", "1.5", "--mode", "k-tuple", "--json"]));
    let c2 = v["results"][0]["value"].as_f64().unwrap();
    assert!((c2 - 3.3185202e-5).abs() < 1e-9, "{c2}");
    assert_eq!(v["meta"]["params"]["B"], 1.0);
    let v = json(&pil(&["constants", "baselines", "--json"]));
    assert_eq!(v["results"][0]["lambda_star"], 1.1447596989);
}
