use std::collections::HashMap;
use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn hered3(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hered3"))
        .args(args)
        .env_remove("HERED3_THREADS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn named(name: &str) -> String {
    let o = hered3(&["generate", "--kind", "named", "--name", name], "");
    assert_eq!(code(&o), 0);
    stdout(&o)
}

fn validator() -> jsonschema::Validator {
    let schema: Value = serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn json_report(o: &Output) -> Value {
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let errors: Vec<String> = validator().iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{v}");
    v
}

fn edges(edge_list: &str) -> Vec<(String, String)> {
    edge_list
        .lines()
        .filter_map(|l| {
            let mut t = l.split_whitespace();
            Some((t.next()?.to_string(), t.next()?.to_string()))
        })
        .collect()
}

#[test]
fn k4_is_not_colorable() {
    let o = hered3(&["solve"], &named("k4"));
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("s NOT_COLORABLE"));
    let v = json_report(&hered3(&["solve", "--json"], &named("k4")));
    assert_eq!(v["decision"], "not_colorable");
}

#[test]
fn c9_witness_is_a_proper_coloring() {
    let g = named("c9");
    let o = hered3(&["solve", "--witness"], &g);
    assert_eq!(code(&o), 0);
    let colors: HashMap<String, u8> = stdout(&o)
        .lines()
        .filter_map(|l| l.strip_prefix("v "))
        .map(|l| {
            let (v, c) = l.split_once(' ').unwrap();
            (v.to_string(), c.parse().unwrap())
        })
        .collect();
    assert_eq!(colors.len(), 9);
    assert!(colors.values().all(|c| (1..=3).contains(c)));
    for (a, b) in edges(&g) {
        assert_ne!(colors[&a], colors[&b], "{a}-{b}");
    }
    let v = json_report(&hered3(&["solve", "--witness", "--json"], &g));
    assert_eq!(v["witness"].as_array().unwrap().len(), 9);
}

#[test]
fn petersen_fails_the_class_check_with_a_c5() {
    let o = hered3(&["check-class", "--json"], &named("petersen"));
    assert_eq!(code(&o), 2);
    let v = json_report(&o);
    assert_eq!(v["decision"], "class_violation");
    assert_eq!(v["class_witness"]["kind"], "C5");
    assert_eq!(v["class_witness"]["vertices"].as_array().unwrap().len(), 5);
    assert_eq!(code(&hered3(&["solve"], &named("petersen"))), 2);
}

#[test]
fn assume_class_skips_the_check() {
    let o = hered3(&["solve", "--assume-class", "--seed-irrelevant"], &named("c5"));
    assert_eq!(code(&o), 0);
}

#[test]
fn parse_and_usage_errors_exit_3() {
    let o = hered3(&["solve", "--format", "dimacs"], "p edge 2 1\ne 1 1\n");
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(code(&hered3(&["solve", "--format", "dimacs"], "e 1 2\n")), 3);
    assert_eq!(code(&hered3(&["frobnicate"], "")), 3);
    assert_eq!(code(&hered3(&["generate", "--kind", "erdos-renyi"], "")), 3);
    assert_eq!(code(&hered3(&["generate", "--kind", "erdos-renyi", "--n", "5", "--p", "2"], "")), 3);
    assert_eq!(code(&hered3(&["solve", "/nonexistent/graph.col"], "")), 3);
    assert_eq!(code(&hered3(&["--help"], "")), 0);
}

#[test]
fn dimacs_input_is_detected() {
    let o = hered3(&["solve", "--json"], "c triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n");
    assert_eq!(code(&o), 0);
    assert_eq!(json_report(&o)["input"]["format"], "dimacs_col");
}

#[test]
fn duplicate_edges_and_palettes_warn() {
    let o = hered3(&["solve"], "a b\nb a\n@ a 1\n");
    assert_eq!(code(&o), 0);
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(err.contains("warning"), "{err}");
    assert!(err.contains("palette annotations ignored"), "{err}");
}

#[test]
fn count_colorings_of_c7() {
    let o = hered3(&["count-colorings", "--json"], &named("c7"));
    assert_eq!(code(&o), 0);
    assert_eq!(json_report(&o)["count"], 126);
    assert_eq!(code(&hered3(&["count-colorings"], &named("k4"))), 1);
}

#[test]
fn generated_graphs_round_trip_through_solve() {
    for format in ["edge-list", "dimacs"] {
        let o = hered3(
            &["generate", "--kind", "c7-gadget", "--extra", "8", "--p", "0.3", "--seed", "5", "--format", format],
            "",
        );
        assert_eq!(code(&o), 0);
        let g = stdout(&o);
        let again = hered3(
            &["generate", "--kind", "c7-gadget", "--extra", "8", "--p", "0.3", "--seed", "5", "--format", format],
            "",
        );
        assert_eq!(g, stdout(&again));
        let v = json_report(&hered3(&["check-class", "--json"], &g));
        assert_eq!(v["decision"], "in_class");
        assert_eq!(v["input"]["vertices"], 15);
        let first = code(&hered3(&["solve"], &g));
        assert!(first <= 1);
        assert_eq!(first, code(&hered3(&["solve"], &g)));
    }
}

#[test]
fn fuzz_runs_clean_and_reports_json() {
    let o = hered3(&["fuzz", "--budget", "200", "--seed", "9", "--sizes", "8..=12", "--json"], "");
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = json_report(&o);
    assert_eq!(v["decision"], "clean");
    assert_eq!(v["fuzz"]["cases"], 200);
    assert_eq!(code(&hered3(&["fuzz", "--sizes", "x"], "")), 3);
}

#[test]
fn thread_count_comes_from_flag_or_environment() {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hered3"));
    let o = cmd
        .args(["fuzz", "--budget", "40", "--sizes", "9"])
        .env("HERED3_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let o = hered3(&["--threads", "1", "fuzz", "--budget", "40", "--sizes", "9"], "");
    assert_eq!(code(&o), 0);
    let o = Command::new(env!("CARGO_BIN_EXE_hered3"))
        .args(["fuzz", "--budget", "5"])
        .env("HERED3_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}
