use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn olymp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_olymp")).args(args).env_remove("OLYMP_SEED").output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn tromino_construct_six() {
    let out = olymp(&["tromino", "construct", "--n", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["data"]["move_count"], 18);
    assert_eq!(r["verdict"], "pass");
}

#[test]
fn tromino_construct_rejects_bad_n() {
    assert_eq!(olymp(&["tromino", "construct", "--n", "4"]).status.code(), Some(2));
}

#[test]
fn tromino_search_two_is_proven_absent() {
    let out = olymp(&["tromino", "search", "--n", "2", "--limit", "1000000"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["data"]["verdict"], "no empty-to-empty sequence (proven)");
}

#[test]
fn tromino_search_limit_is_inconclusive() {
    let out = olymp(&["tromino", "search", "--n", "4", "--limit", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["verdict"], "inconclusive");
}

#[test]
fn tromino_certify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let moves = dir.path().join("moves.json");
    let out = olymp(&["tromino", "construct", "--n", "3", "--out", moves.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["witness_files"][0], moves.to_str().unwrap());
    let out = olymp(&["tromino", "certify", "--n", "3", "--moves", moves.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["data"]["p"], "1 + x + x*y");
    assert_eq!(r["data"]["nonroot"]["p_value_exact"], "2 + 1ω");

    // a sequence that leaves stones behind is an input error
    fs::write(&moves, r#"[{"op":"place","i":1,"j":1}]"#).unwrap();
    assert_eq!(olymp(&["tromino", "certify", "--n", "3", "--moves", moves.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(olymp(&["bogus"]).status.code(), Some(2));
    assert_eq!(olymp(&["tromino", "construct"]).status.code(), Some(2));
    assert_eq!(olymp(&["cyclic", "solve", "--n", "3"]).status.code(), Some(2));
}

#[test]
fn malformed_file_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("set.json");
    fs::write(&set, "{\"elements\": [1,\n 2,, 3]}").unwrap();
    let out = olymp(&["gcdset", "verify", "--set", set.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn gcdset_commands() {
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("set.json");
    fs::write(&set, r#"{"elements":[10,14,15,21]}"#).unwrap();
    assert_eq!(olymp(&["gcdset", "verify", "--set", set.to_str().unwrap()]).status.code(), Some(0));
    fs::write(&set, r#"{"elements":[2,4]}"#).unwrap();
    assert_eq!(olymp(&["gcdset", "verify", "--set", set.to_str().unwrap()]).status.code(), Some(1));

    let out = olymp(&["gcdset", "construct", "--k", "2", "--primes", "2 5 3 7"]);
    assert_eq!(report(&out)["data"]["set"], serde_json::json!([10, 14, 15, 21]));
    assert_eq!(olymp(&["gcdset", "construct", "--k", "2", "--primes", "2 2 3 7"]).status.code(), Some(2));

    let out = olymp(&["gcdset", "search", "--max-element", "50", "--max-size", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["claims"][0]["detail"], serde_json::json!([1, 2, 4]));
}

#[test]
fn park_commands() {
    let out = olymp(&["park", "simulate"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["data"]["max_visits"]["count"], 3);
    assert_eq!(r["data"]["walk"]["steps"].as_array().unwrap().len(), 16);

    let dir = tempfile::tempdir().unwrap();
    let witness = dir.path().join("witness.json");
    let out = olymp(&["park", "search", "--max-junctions", "8", "--samples", "50", "--out", witness.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = olymp(&["park", "verify", "--layout", witness.to_str().unwrap(), "--fuzz", "20"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["data"]["all_stats"]["layouts"], 21);

    // bare layout file needs an explicit start
    let w: Value = serde_json::from_str(&fs::read_to_string(&witness).unwrap()).unwrap();
    let layout = dir.path().join("layout.json");
    fs::write(&layout, w["layout"].to_string()).unwrap();
    let path = layout.to_str().unwrap();
    assert_eq!(olymp(&["park", "simulate", "--layout", path]).status.code(), Some(2));
    let trail = w["layout"]["rotation"]["0"][0].to_string();
    let out = olymp(&["park", "simulate", "--layout", path, "--start", "0", "--first-trail", &trail, "--first-turn", "R"]);
    assert_eq!(out.status.code(), Some(0));

    fs::write(&layout, r#"{"junctions":2,"trails":[[0,1],[0,1],[0,1]],"rotation":{"0":[0,1,2],"1":[0,1,2]}}"#).unwrap();
    let out = olymp(&["park", "verify", "--layout", path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parallel trails"));
}

#[test]
fn cyclic_and_geometry_commands() {
    let out = olymp(&["cyclic", "solve", "--n", "5", "--starts", "10", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["data"]["runs"].as_array().unwrap().len(), 10);

    assert_eq!(olymp(&["geom", "p1", "--trials", "50"]).status.code(), Some(0));
    assert_eq!(olymp(&["geom", "p6", "--trials", "50"]).status.code(), Some(0));
    // the perturbed configurations must fail
    assert_eq!(olymp(&["geom", "p1", "--trials", "50", "--perturb", "0.05"]).status.code(), Some(1));
}

#[test]
fn seed_comes_from_environment() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_olymp"));
        cmd.args(args).env_remove("OLYMP_SEED");
        if let Some(s) = env {
            cmd.env("OLYMP_SEED", s);
        }
        report(&cmd.output().unwrap())["seed"].clone()
    };
    assert_eq!(run(None, &["geom", "p6", "--trials", "1"]), 42);
    assert_eq!(run(Some("7"), &["geom", "p6", "--trials", "1"]), 7);
    assert_eq!(run(Some("7"), &["geom", "p6", "--trials", "1", "--seed", "9"]), 9);
}

#[test]
fn broken_tolerance_fails_geometry() {
    let out = olymp(&["run-all", "--tol", "1e-20"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    let verdicts: Vec<&str> = r["claims"].as_array().unwrap().iter().map(|c| c["verdict"].as_str().unwrap()).collect();
    assert_eq!(verdicts, ["pass", "pass", "pass", "pass", "pass", "pass", "fail", "fail"]);
}
