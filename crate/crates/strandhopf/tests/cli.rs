//! End-to-end tests of the `strandhopf` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use strandhopf::cli_io;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(format!("{name}.json"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strandhopf")).args(args).output().expect("binary runs")
}

fn run_file(cmd: &str, name: &str, extra: &[&str]) -> Output {
    let path = data(name);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stderr_error_kind(o: &Output) -> String {
    let v: Value = serde_json::from_slice(&o.stderr).expect("stderr is JSON");
    assert!(v["error"]["message"].is_string());
    v["error"]["kind"].as_str().unwrap().to_string()
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_error_kind(&o), "usage");
    let o = run(&["contract", data("fish_same").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_reports_and_sets_exit_code() {
    let o = run_file("validate", "torus", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["valid"], true);

    let dir = tempfile::tempdir().unwrap();
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(data("fish_same")).unwrap()).unwrap();
    doc["sigma2"] = Value::Array(vec![]);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, doc.to_string()).unwrap();
    let o = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v = stdout_json(&o);
    assert_eq!(v["valid"], false);
    assert!(v["violations"].as_array().unwrap().iter().all(|x| x["axiom"].is_string() && x["detail"].is_string()));
}

#[test]
fn io_errors_exit_2() {
    let o = run(&["info", "/nonexistent/graph.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_error_kind(&o), "io");
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.json");
    std::fs::write(&p, "[1, 2").unwrap();
    let o = run(&["info", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_error_kind(&o), "parse");
}

#[test]
fn contracting_the_distinct_fish_gives_a_double_trace_vertex() {
    let o = run_file("contract", "fish_distinct", &["--edges", "e1,e2"]);
    assert_eq!(o.status.code(), Some(0));
    let q = cli_io::parse_graph(std::str::from_utf8(&o.stdout).unwrap()).unwrap();
    assert_eq!((q.num_vertices(), q.num_edges()), (1, 0));
    assert_eq!(q.vertex_graph(0).num_components(), 2);
    let o = run_file("contract", "fish_distinct", &["--edges", "e9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn coproduct_schema() {
    let o = run_file("coproduct", "fish_same", &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 3);
    for t in terms {
        assert!(t["left"].is_array() && t["right"].is_array() && t["coefficient"].is_string());
    }
    let o = run(&["--format", "table", "coproduct", data("fish_same").to_str().unwrap()]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 3);
}

#[test]
fn classify_schema() {
    let o = run_file("classify", "bgr_melonic_two_point", &["--theory", "bgr"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["theory"], "bgr");
    let c = &v["components"][0];
    assert_eq!(c["omega_sd"], "1");
    assert_eq!(c["divergent"], true);
}

#[test]
fn output_is_deterministic() {
    let a = run(&["enumerate", "--theory", "quartic3", "--max-edges", "2"]);
    let b = run(&["enumerate", "--theory", "quartic3", "--max-edges", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    for line in std::str::from_utf8(&a.stdout).unwrap().lines() {
        cli_io::parse_graph(line).unwrap();
    }
}

#[test]
fn thread_setting_is_validated() {
    let bin = env!("CARGO_BIN_EXE_strandhopf");
    let o = Command::new(bin)
        .args(["central-check", "--theory", "gw4", "--max-edges", "1"])
        .env("STRANDHOPF_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(bin)
        .args(["central-check", "--theory", "gw4", "--max-edges", "1"])
        .env("STRANDHOPF_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["result"], "PASS");
}

#[test]
fn dot_and_theory_documents() {
    let o = run_file("export-dot", "matrix_fish", &[]);
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("graph"));
    let o = run(&["theory", "quartic3"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let t = cli_io::parse_theory(&text).unwrap();
    assert_eq!(cli_io::theory_to_json(&t), text);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("theory.json");
    std::fs::write(&p, &text).unwrap();
    let o = run_file("classify", "fish_same", &["--theory", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}
