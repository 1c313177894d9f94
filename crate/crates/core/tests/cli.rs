use std::process::Command;

use harmonic::incfile::parse_incidence;
use harmonic::{build_pg, iso_find, Field};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["harmonic"];
    full.extend_from_slice(args);
    let code = harmonic::cli::run(full, &mut out, &mut err);
    let text = String::from_utf8(out).unwrap();
    let v = serde_json::from_str(&text).unwrap_or(Value::Null);
    (code, v, String::from_utf8(err).unwrap())
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("harmonic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn theorem_pp_p3() {
    let (code, v, err) = run(&["verify", "theorem-pp", "-p", "3"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(v["claim"], "theorem-pp");
    assert_eq!(v["verdict"], "verified");
    assert_eq!(v["sizes"]["closure_points"], 13);
    assert!(v["elapsed_ms"].is_number());
    assert_eq!(v["seed"], 0);
    assert!(err.contains("theorem-pp"));
}

#[test]
fn report_fields_and_seed() {
    let (_, v, _) = run(&["--rng-seed", "42", "--quiet", "verify", "theorem-pp", "-p", "2"]);
    for k in ["claim", "verdict", "sizes", "stages", "elapsed_ms", "seed", "checks"] {
        assert!(v.get(k).is_some(), "{k}");
    }
    assert_eq!(v["seed"], 42);
    assert_eq!(v["stages"], 0);
    assert!(v.get("counterexample").is_none());
}

#[test]
fn quiet_suppresses_summary() {
    let (_, _, err) = run(&["--quiet", "verify", "theorem-pp", "-p", "2"]);
    assert!(err.is_empty());
}

#[test]
fn verify_all_p5_reports_minimality() {
    // every part except the deletion half of minimality is verified
    let (code, v, _) = run(&["--quiet", "verify", "all", "-p", "5", "--samples", "500"]);
    assert_eq!(code, 1);
    let reports = v["details"]["reports"].as_array().unwrap();
    let claims: Vec<&str> = reports.iter().map(|r| r["claim"].as_str().unwrap()).collect();
    assert_eq!(claims, ["theorem-pp", "minimality", "symmetry", "sequence-plane"]);
    for r in reports {
        let want = if r["claim"] == "minimality" { "falsified" } else { "verified" };
        assert_eq!(r["verdict"], want, "{}", r["claim"]);
    }
}

#[test]
fn minimality_exit_code_and_sizes() {
    let (code, v, _) = run(&["--quiet", "verify", "minimality", "-p", "3"]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "falsified");
    assert_eq!(v["sizes"]["closure_points"], 13);
    assert_eq!(v["details"]["deletions"].as_array().unwrap().len(), 9);
    assert!(v["counterexample"].is_object());
}

#[test]
fn group_expansion_experiment_is_observed() {
    for amb in ["pg:4", "pg:2^2"] {
        let (code, v, err) = run(&["--quiet", "closure", "--ambient", amb, "--seed", "group_expansion:2,2"]);
        assert_eq!(code, 0, "{err}");
        assert_eq!(v["verdict"], "observed");
        assert_eq!(v["sizes"]["seed_points"], 13);
    }
}

#[test]
fn closure_with_trace_file() {
    let path = tmp("trace.json");
    let (code, v, _) = run(&[
        "--quiet",
        "closure",
        "--ambient",
        "pg:3",
        "--seed",
        "lp:3",
        "--trace",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["sizes"]["closure_points"], 13);
    assert_eq!(v["stages"], 1);
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let added: Vec<&str> = t["stages"][0]["added"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["point"].as_str().unwrap())
        .collect();
    let mut sorted = added.clone();
    sorted.sort();
    assert_eq!(sorted, ["[1,0,2]", "[1,1,2]", "[1,2,2]"]);
    assert_eq!(t["fixpoint"], true);
}

#[test]
fn closure_from_inc_file() {
    let path = tmp("lp3.inc");
    let (code, _, _) = run(&["--quiet", "build", "lp", "-p", "3", "-o", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, v, err) = run(&["--quiet", "closure", "--ambient", "pg:3", "--seed", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(v["sizes"]["closure_points"], 13);
    // quadrangle conjugation gives the same closure
    let (_, v2, _) = run(&[
        "--quiet",
        "closure",
        "--ambient",
        "pg:3",
        "--seed",
        "lp:3",
        "--method",
        "quadrangle",
    ]);
    assert_eq!(v2["details"]["closure"], v["details"]["closure"]);
}

#[test]
fn build_fano_round_trips() {
    let path = tmp("fano.inc");
    let (code, v, _) = run(&["--quiet", "build", "fano", "-o", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["sizes"]["points"], 7);
    let s = parse_incidence(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let pg2 = build_pg(&Field::prime(2).unwrap()).unwrap();
    assert!(iso_find(&s, pg2.structure()).unwrap().is_some());
    assert_eq!(s.label(0), Some("y"));
}

#[test]
fn build_inline_incidence() {
    let (code, v, _) = run(&["--quiet", "build", "reid", "-n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["sizes"]["points"], 11);
    let text = v["details"]["incidence"].as_str().unwrap();
    assert_eq!(parse_incidence(text).unwrap().point_count(), 11);
}

#[test]
fn conjugate_methods_agree() {
    // x = y + 2z, so x' = y - 2z = [1,1,0]
    let (code, v, _) = run(&[
        "--quiet", "conjugate", "--ambient", "pg:3", "--y", "[1,0,0]", "--z", "[0,1,0]", "--x", "[1,2,0]",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["conjugate"], "[1,1,0]");
    assert_eq!(v["details"]["crossratio"], "[1,1,0]");
    assert_eq!(v["details"]["quadrangle"]["conjugate"], "[1,1,0]");
}

#[test]
fn conjugate_in_extension_field() {
    let (code, v, _) = run(&[
        "--quiet", "conjugate", "--ambient", "pg:3^2:1,0,1", "--y", "[1,0,0]", "--z", "[0,1,0]", "--x", "[1,1,0]",
        "--method", "crossratio",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["conjugate"], "[1,2,0]");
}

#[test]
fn sequence_with_plane() {
    let (code, v, err) = run(&[
        "--quiet", "sequence", "--ambient", "pg:5", "--base", "[0,1,0]", "--a0", "[1,0,0]", "--a1", "[1,1,0]",
        "--verify-plane",
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(v["claim"], "sequence-plane");
    assert_eq!(v["sizes"]["period"], 5);
    assert_eq!(v["sizes"]["closure_points"], 31);
    assert_eq!(v["details"]["sequence"]["period"], 5);
}

#[test]
fn sequence_in_gf9_has_period_3() {
    let (code, v, _) = run(&["--quiet", "sequence", "--ambient", "pg:9", "--base", "[0,1,0]", "--a0", "[1,0,0]", "--a1", "[1,1,0]"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "observed");
    assert_eq!(v["sizes"]["period"], 3);
}

#[test]
fn non_collinear_sequence_is_an_error() {
    let (code, v, _) = run(&["--quiet", "sequence", "--ambient", "pg:9", "--base", "[0,1,0]", "--a0", "[0,0,1]", "--a1", "[1,1,1]"]);
    assert_eq!(code, 2);
    assert_eq!(v["verdict"], "error");
}

#[test]
fn audits() {
    let (code, v, _) = run(&["--quiet", "audit", "fano"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["audit"]["verdict"], "harmonic");
    let (code, v, _) = run(&["--quiet", "audit", "nonfano"]);
    assert_eq!(code, 1);
    assert_eq!(v["details"]["audit"]["verdict"], "incomplete");
    let (code, v, _) = run(&["--quiet", "audit", "pg:3"]);
    assert_eq!(code, 0);
    assert_eq!(v["sizes"]["witness_free"], 0);
}

#[test]
fn synthesize_writes_certificate() {
    let path = tmp("cert5.json");
    let (code, v, _) = run(&["--quiet", "synthesize", "-p", "5", "--certificate", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["claim"], "synthesis");
    assert_eq!(v["sizes"]["covered"], 31);
    let c: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(c["p"], 5);
    assert_eq!(c["wrap_check"], true);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["verify", "theorem-pp"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["--quiet", "verify", "theorem-pp", "-p", "4"]).0, 2);
    assert_eq!(run(&["--quiet", "synthesize", "-p", "2"]).0, 2);
    let (code, v, _) = run(&["--quiet", "closure", "--ambient", "pg:6", "--seed", "lp:3"]);
    assert_eq!(code, 2);
    assert_eq!(v["claim"], "closure");
    assert_eq!(run(&["--quiet", "closure", "--ambient", "ag:3", "--seed", "lp:3"]).0, 2);
}

#[test]
fn binary_respects_env_bound() {
    let exe = env!("CARGO_BIN_EXE_harmonic");
    let out = Command::new(exe)
        .args(["--quiet", "conjugate", "--ambient", "pg:5", "--y", "[1,0,0]", "--z", "[0,1,0]", "--x", "[1,1,0]"])
        .env("HARMONIC_MAX_PG_ORDER", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "error");

    let out = Command::new(exe).args(["--json", "verify", "theorem-pp", "-p", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() > 1, "pretty output");
    assert!(!out.stderr.is_empty());
}
