use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn maxent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxent"))
        .args(args)
        .env("MAXENT_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fit(dir: &Path, edges: &str, extra: &[&str]) -> (Output, String) {
    let input = write(dir, "g.edges", edges);
    let model = dir.join("model.json").to_str().unwrap().to_string();
    let mut args = vec!["fit", "--input", &input, "--output", &model];
    args.extend_from_slice(extra);
    (maxent(&args), model)
}

#[test]
fn c4_predict_is_two_thirds() {
    let dir = TempDir::new().unwrap();
    let (out, model) = fit(dir.path(), "0 1\n1 2\n2 3\n3 0\n", &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let pairs = write(dir.path(), "pairs.txt", "0 2\n1 3\n");
    let out = maxent(&["predict", "--model", &model, "--pairs", &pairs]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "src,dst,probability");
    for row in &rows[1..] {
        let p: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!((p - 2.0 / 3.0).abs() < 1e-3, "{row}");
    }
}

#[test]
fn invalid_pairs_are_marked_and_exit_4() {
    let dir = TempDir::new().unwrap();
    let (_, model) = fit(dir.path(), "0 1\n1 2\n2 3\n3 0\n", &[]);
    let pairs = write(dir.path(), "pairs.txt", "1 1\n0 99\nzero one\n0 2\n");
    let out = maxent(&["predict", "--model", &model, "--pairs", &pairs]);
    assert_eq!(out.status.code(), Some(4));
    let text = stdout(&out);
    assert!(text.contains("1,1,error:self-pair"));
    assert!(text.contains("0,99,error:unknown-node"));
    assert!(text.contains("error:malformed"));
    assert!(text.lines().any(|l| l.starts_with("0,2,0.")));
}

#[test]
fn karate_groups_with_assortativity() {
    let dir = TempDir::new().unwrap();
    let edges = maxent_core::datasets::karate().to_edge_list();
    let (out, _) = fit(dir.path(), &edges, &["--feature", "pa"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let groups = text.lines().find(|l| l.starts_with("groups")).expect("groups line");
    assert!(groups.split_whitespace().nth(1) == Some("11"), "{groups}");
}

#[test]
fn empty_input_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let (out, _) = fit(dir.path(), "", &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_flags_are_config_errors() {
    let dir = TempDir::new().unwrap();
    let (out, _) = fit(dir.path(), "0 1\n1 2\n", &["--coeffs", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = maxent(&["fit", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn iteration_cap_exits_3_and_still_saves() {
    let dir = TempDir::new().unwrap();
    let edges = maxent_core::datasets::karate().to_edge_list();
    let (out, model) = fit(dir.path(), &edges, &["--max-iters", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(Path::new(&model).exists());
}

#[test]
fn linkpred_rejects_disconnected_input() {
    let dir = TempDir::new().unwrap();
    let input = write(dir.path(), "g.edges", "0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n");
    let out = maxent(&["linkpred", "--input", &input, "--repeats", "1"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("component"));
}

#[test]
fn sampling_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let edges = maxent_core::datasets::karate().to_edge_list();
    let (_, model) = fit(dir.path(), &edges, &[]);
    let draw = |name: &str| {
        let out_dir = dir.path().join(name);
        let o = out_dir.to_str().unwrap();
        let out = maxent(&["sample", "--model", &model, "--samples", "2", "--seed", "7", "--output", o]);
        assert_eq!(out.status.code(), Some(0));
        (fs::read_to_string(out_dir.join("sample_0.edges")).unwrap(), fs::read_to_string(out_dir.join("sample_1.edges")).unwrap())
    };
    let (a0, a1) = draw("a");
    let (b0, b1) = draw("b");
    assert_eq!(a0, b0);
    assert_eq!(a1, b1);
    assert_ne!(a0, a1);
    assert!(a0.starts_with("# nodes 34 edges "));
}
