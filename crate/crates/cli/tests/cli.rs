use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn mapgf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mapgf")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mapgf-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

#[test]
fn kernel_series() {
    let o = mapgf(&["series", "--p", "2", "--which", "R", "--t-max", "3", "--xdeg-max", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "t^2 x2^1 : 3/1"));
    let o = mapgf(&["series", "--p", "3", "--which", "R", "--xdeg-max", "0"]);
    assert_eq!(stdout(&o), "t^1 : 1/1\n");
}

#[test]
fn blossoming_series_prints_the_kernel() {
    let args = |w: &'static str| ["series", "--p", "2", "--which", w, "--t-max", "5", "--xdeg-max", "2"];
    let r = mapgf(&args("R"));
    let t = mapgf(&args("T"));
    assert!(r.status.success());
    assert_eq!(r.stdout, t.stdout);
}

#[test]
fn rooted_maps_and_json() {
    let o = mapgf(&["--json", "series", "--p", "2", "--which", "M", "--t-max", "3", "--xdeg-max", "1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["truncation"]["t_max"], 3);
    assert!(!v["terms"].as_array().unwrap().is_empty());
}

#[test]
fn output_is_deterministic() {
    let args = ["gf", "--p", "2", "--boundaries", "1,3", "--t-max", "5", "--xdeg-max", "2"];
    let a = mapgf(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, mapgf(&args).stdout);
}

#[test]
fn counts() {
    assert_eq!(stdout(&mapgf(&["count", "--p", "2", "--boundaries", "4"])), "2\n");
    assert_eq!(stdout(&mapgf(&["count", "--p", "3", "--boundaries", "2,4"])), "12\n");
    assert_eq!(stdout(&mapgf(&["count", "--p", "2", "--boundaries", "2,2,2"])), "8\n");
}

#[test]
fn exit_codes() {
    let parity = mapgf(&["count", "--p", "2", "--boundaries", "1,1,1,1"]);
    assert_eq!(parity.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&parity.stderr).contains("unsupported boundary parity"));
    assert_eq!(mapgf(&["count", "--p", "2", "--boundaries", "1,2"]).status.code(), Some(2));
    assert_eq!(mapgf(&["count", "--p", "2"]).status.code(), Some(2));
    assert_eq!(mapgf(&["series", "--which", "Q"]).status.code(), Some(2));
    assert_eq!(mapgf(&["verify", "nonsense"]).status.code(), Some(2));
}

#[test]
fn bdg_on_small_maps() {
    let edge = temp_file("edge.json", r#"{"n_darts": 2, "sigma": [0, 1]}"#);
    let o = mapgf(&["--json", "bdg", "--map", edge.to_str().unwrap(), "--vertex", "0"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["report"]["white_vertices"], 1);
    assert_eq!(v["report"]["black_degrees"], serde_json::json!([2]));
    assert_eq!(v["report"]["class"], "bipartite");

    let looped = temp_file("loop.json", r#"{"n_darts": 2, "sigma": [1, 0], "pointed_vertex": 0}"#);
    let o = mapgf(&["bdg", "--map", looped.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("class: quasi-bipartite"));
    assert!(text.contains("degrees match: true"));

    let bad = temp_file("bad.json", r#"{"n_darts": 2, "sigma": [0, 0]}"#);
    assert_eq!(mapgf(&["bdg", "--map", bad.to_str().unwrap(), "--vertex", "0"]).status.code(), Some(2));
    let torus = temp_file("torus.json", r#"{"n_darts": 4, "sigma": [2, 3, 1, 0]}"#);
    assert_eq!(mapgf(&["bdg", "--map", torus.to_str().unwrap(), "--vertex", "0"]).status.code(), Some(2));
}

#[test]
fn verify_slicings_passes() {
    let o = mapgf(&["verify", "slicings", "--max-edges", "4", "--p", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("PASS slicings p=2 [2,2,2]: expected 8, got 8"));
    assert!(text.contains("PASS slicings p=2 [3,3]: expected 12, got 12"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_eynard_and_lemmas() {
    let o = mapgf(&["verify", "eynard", "--t-max", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let o = mapgf(&["--json", "verify", "lemmas", "--p", "3", "--budget", "small"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let cases = v["cases"].as_array().unwrap();
    assert!(!cases.is_empty());
    assert!(cases.iter().all(|c| c["status"] == "PASS"));
}

#[test]
fn verify_budget_exit_code() {
    let o = mapgf(&["verify", "slicings", "--p", "2", "--max-darts", "4"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("BUDGET"));
}

#[test]
fn config_file_and_flag_override() {
    let cfg = temp_file("verify.conf", "# defaults\nbudget = small\nmax-edges = 2\n");
    let cfg = cfg.to_str().unwrap();
    let from_file = stdout(&mapgf(&["--config", cfg, "verify", "slicings", "--p", "2"]));
    let overridden = stdout(&mapgf(&["--config", cfg, "verify", "slicings", "--p", "2", "--max-edges", "3"]));
    assert!(!from_file.contains("[3,3]"));
    assert!(overridden.contains("[3,3]"));
    let broken = temp_file("broken.conf", "max-edges 2\n");
    let o = mapgf(&["--config", broken.to_str().unwrap(), "verify", "slicings"]);
    assert_eq!(o.status.code(), Some(2));
}
