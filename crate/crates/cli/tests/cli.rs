use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_groupoid-card"))
        .args(args)
        .env_remove("GROUPOID_CARD_MAX_N")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn write_tmp(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn verify_lemma_single() {
    let out = run(&["verify-lemma", "--n", "3", "--p", "0,1,0"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["equal"], true);
    assert_eq!(v["lhs"], "1/2");
    assert_eq!(v["rhs"], "1/2");
    assert!(v.get("estimate").is_none());
}

#[test]
fn verify_lemma_sweep() {
    let out = run(&["verify-lemma", "--n", "6", "--all-p", "--max-entry", "2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["count"], v["passed"]);
    assert!(v["count"].as_u64().unwrap() > 10);

    let out = run(&[
        "verify-lemma",
        "--n",
        "5",
        "--all-p",
        "--method",
        "cycle-type",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("n,p,method,lhs,rhs,equal"));
    assert!(text
        .lines()
        .skip(1)
        .all(|l| l.contains("cycle_type") && l.contains(",true,")));
}

#[test]
fn verify_lemma_vanishing_case() {
    let out = run(&["verify-lemma", "--n", "3", "--p", "1,0,1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["lhs"], "0/1");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify-lemma", "--n", "3", "--p", "1,1"][..],
        &["verify-lemma", "--n", "3"],
        &["verify-lemma", "--n", "3", "--p", "x,1,0"],
        &["verify-lemma", "--n", "3", "--p", "0,1,0", "--all-p"],
        &["verify-lemma", "--n", "3", "--p", "0,1,0", "--method", "guess"],
        &["montecarlo", "--n", "10", "--p-one", "k=2", "--samples", "1"],
        &["montecarlo", "--n", "10", "--p-one", "k=11"],
        &["montecarlo", "--n", "10", "--p-one", "q=2"],
        &["theorem-general", "--builtin", "cycle-tuples", "--n", "3"],
        &["stats", "--n", "0"],
        &["no-such-command"],
    ] {
        let out = run(args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn categorified_single_and_sweep() {
    let out = run(&["verify-categorified", "--n", "4", "--p", "0,2,0,0"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["equivalent"], true);
    assert_eq!(v["lhs_card"], "1/4");
    assert_eq!(v["rhs_card"], "1/4");
    assert_eq!(v["q_size"], 6);

    let out = run(&["verify-categorified", "--n", "5", "--all-p"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["all_passed"], true);
}

#[test]
fn categorified_cap_exceeded() {
    let out = run(&["verify-categorified", "--n", "12", "--p", "0,0,0,0,0,0,0,0,0,0,0,1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn cap_follows_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_groupoid-card"))
        .args(["verify-lemma", "--n", "4", "--p", "1,0,0,0"])
        .env("GROUPOID_CARD_MAX_N", "3")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    let out = run(&["verify-lemma", "--n", "4", "--p", "1,0,0,0"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn skeleton_examples() {
    let v = json(&run(&["skeleton", "--n", "3"]));
    assert_eq!(v["cardinality"], "1/1");
    let mut orders: Vec<u64> = v["skeleton"]["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["aut_order"].as_u64().unwrap())
        .collect();
    orders.sort();
    assert_eq!(orders, vec![2, 3, 6]);

    let v = json(&run(&["skeleton", "--n", "0"]));
    assert_eq!(v["skeleton"]["components"].as_array().unwrap().len(), 1);
    assert_eq!(v["cardinality"], "1/1");

    let out = run(&["skeleton", "--n", "-1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(v["skeleton"]["components"].as_array().unwrap().is_empty());
    assert_eq!(v["cardinality"], "0/1");

    let text = String::from_utf8(run(&["skeleton", "--n", "3", "--format", "text"]).stdout).unwrap();
    assert!(text.contains("(2,1):2"));
}

#[test]
fn stats_table() {
    let out = run(&["stats", "--n", "5"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["expected_cycles"], "137/60");
    assert_eq!(v["harmonic_number"], "137/60");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[1]["mean"], "1/2");
    assert_eq!(rows[1]["second_factorial_moment"], "1/4");
    // 2 * 3 > 5: no two disjoint 3-cycles
    assert_eq!(rows[2]["second_factorial_moment"], "0/1");
    assert_eq!(rows[2]["poisson_second"], "1/9");
}

#[test]
fn montecarlo_is_reproducible() {
    let args = [
        "montecarlo",
        "--n",
        "100",
        "--p-one",
        "k=2",
        "--samples",
        "100000",
        "--seed",
        "42",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert!(v["z_score"].as_f64().unwrap().abs() <= 4.0);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["rhs"], "1/2");
    assert!(v.get("equal").is_none());
}

#[test]
fn theorem_general_builtins() {
    let v = json(&run(&["theorem-general", "--builtin", "fixed-points", "--n", "3"]));
    assert_eq!(v["expected_size"], "1/1");
    assert_eq!(v["elements_cardinality"], "1/1");

    let out = run(&[
        "theorem-general",
        "--builtin",
        "cycle-tuples",
        "--n",
        "4",
        "--p",
        "0,2,0,0",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["expected_size"], "1/4");
    assert_eq!(v["elements_cardinality"], "1/4");

    let out = run(&["theorem-general", "--builtin", "trivial", "--group", "Q8"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["elements_cardinality"], "1/1");
}

#[test]
fn theorem_general_from_files() {
    // Z/2 swapping two points over each element
    let good = write_tmp(
        "good_functor.json",
        r#"{"group": "Z2", "fibers": {"0": 2, "1": 2},
            "transports": {"0": {"0": [0, 1], "1": [0, 1]}, "1": {"0": [1, 0], "1": [1, 0]}}}"#,
    );
    let out = run(&["theorem-general", "--functor", good.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["expected_size"], "2/1");

    // Z/3 cannot act on two points by a swap
    let bad = write_tmp(
        "bad_functor.json",
        r#"{"group": "Z3", "fibers": {"0": 2, "1": 2, "2": 2},
            "transports": {"0": {"0": [0, 1], "1": [0, 1], "2": [0, 1]},
                           "1": {"0": [1, 0], "1": [1, 0], "2": [1, 0]},
                           "2": {"0": [0, 1], "1": [0, 1], "2": [0, 1]}}}"#,
    );
    let out = run(&["theorem-general", "--functor", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("triple"));
    let v = json(&out);
    assert_eq!(v["valid"], false);
    assert_eq!(v["violation"]["law"], "composition");

    let garbage = write_tmp("garbage_functor.json", "{ not json");
    assert_eq!(
        code(&run(&["theorem-general", "--functor", garbage.to_str().unwrap()])),
        2
    );
    assert_eq!(code(&run(&["theorem-general", "--functor", "/nonexistent/f.json"])), 2);
}

#[test]
fn failed_check_exits_1() {
    // a zero z tolerance cannot be met by a noisy estimate
    let out = run(&[
        "montecarlo",
        "--n",
        "20",
        "--p-one",
        "k=1",
        "--samples",
        "1000",
        "--z-threshold",
        "0",
    ]);
    assert_eq!(code(&out), 1);
    assert!(json(&out)["z_score"].as_f64().unwrap() != 0.0);
    let text = run(&[
        "montecarlo",
        "--n",
        "20",
        "--p-one",
        "k=1",
        "--samples",
        "1000",
        "--z-threshold",
        "0",
        "--format",
        "text",
    ]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("FAIL"));
}
