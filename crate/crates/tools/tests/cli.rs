mod common;

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eulerch")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn data(name: &str) -> String {
    common::data(name).display().to_string()
}

#[test]
fn triangle_is_a_valid_circle() {
    let o = run(&["validate", &data("triangle.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "triangle: valid sphere, n=1, w=3, f=3\n");
}

#[test]
fn broken_cover_is_invalid_with_reason() {
    let o = run(&["validate", &data("broken_cover.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("invalid"), "{}", stdout(&o));
    assert!(stdout(&o).contains("(\"ab\", \"ca\")"), "{}", stdout(&o));
}

#[test]
fn bundle_validation_prints_a_stalk_table() {
    let o = run(&["validate", &data("hopf_bundle.json")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows = out.lines().filter(|l| l.trim_end().ends_with("euler 0") && l.contains(" yes ")).count();
    assert_eq!(rows, 14, "{out}");
    assert!(out.contains("hopf: valid bundle"));
}

#[test]
fn parse_errors_exit_with_two_and_a_position() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\n  \"n\": 1,\n  \"cells\": [\n").unwrap();
    let o = run(&["validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn dangling_references_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("dangling.json");
    std::fs::write(&p, r#"{"aggregations": {"a": {"source": "x", "target": "y", "cell_map": {}}}}"#).unwrap();
    let o = run(&["validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no complex named \"x\""), "{}", stderr(&o));
    let o = run(&["validate", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn constant_system_cochain_is_zero() {
    let o = run(&["euler", "--mode", "cochain", &data("constant_circle.json")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 4);
    assert!(out.lines().all(|l| l.ends_with(": 0")), "{out}");
}

#[test]
fn hopf_period_is_a_unit() {
    let o = run(&["euler", "--mode", "period", &data("hopf_bundle.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "hopf fundamental: -1 (integer: yes)\n");
}

#[test]
fn period_json_reports_the_cycle_and_exact_value() {
    let o = run(&["euler", "--mode", "period", "--json", &data("hopf_bundle.json")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["period"], "-1");
    assert_eq!(v[0]["integer"], true);
    assert_eq!(v[0]["cycle"]["0,1,2"], "-1");
    assert_eq!(v[0]["cycle"]["1,2,3"], "1");
}

#[test]
fn separate_cycle_file_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("twice.json");
    std::fs::write(&p, r#"{"chain": {"1,2,3": 2, "0,2,3": -2, "0,1,3": 2, "0,1,2": -2}}"#).unwrap();
    let o = run(&["euler", "--mode", "period", "--cycle", p.to_str().unwrap(), &data("hopf_bundle.json")]);
    assert_eq!(stdout(&o), "hopf twice: -2 (integer: yes)\n");
    std::fs::write(&p, r#"{"chain": {"1,2,3": 1}}"#).unwrap();
    let o = run(&["euler", "--mode", "period", "--cycle", p.to_str().unwrap(), &data("hopf_bundle.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not a cycle"));
}

#[test]
fn simplicial_values_of_the_hopf_bundle() {
    let o = run(&["euler", "--mode", "simplicial", &data("hopf_bundle.json")]);
    let expected = "hopf [0, 1, 2]: 5/18\nhopf [0, 1, 3]: -5/18\nhopf [0, 2, 3]: 5/18\nhopf [1, 2, 3]: -1/6\n";
    assert_eq!(stdout(&o), expected);
}

#[test]
fn local_mode_gives_one_rational_per_chain() {
    let o = run(&["euler", "--mode", "local", "--decimal", &data("polygon_chain.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "six-three-two: -1/36  (~ -0.027778)\ntwelve-six-three: 0  (~ 0.000000)\n");
}

#[test]
fn homology_of_the_hopf_total_complex() {
    let o = run(&["homology", &data("hopf_bundle.json")]);
    let out = stdout(&o);
    assert!(out.contains("Tot dims [84, 228, 216, 72]"));
    assert!(out.contains("H_1 = 0") && out.contains("H_3 = Z"));
    let o = run(&["homology", "--coefficients", "q", &data("product_bundle.json")]);
    assert!(stdout(&o).contains("betti [1, 1, 1, 1]"));
}

#[test]
fn ingest_then_period_matches_the_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("hopf_system.json");
    let o = run(&["ingest", &data("hopf_bundle.json"), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["euler", "--mode", "period", out.to_str().unwrap()]);
    assert_eq!(stdout(&o), "hopf/system hopf/cycle/0: -1 (integer: yes)\n");
    let o = run(&["validate", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn empty_experiment_is_a_header() {
    let o = run(&["experiment", "--stat", "bounds"]);
    assert_eq!(stdout(&o), "source,name,simplex,e_ch,abs\n");
    let o = run(&["experiment", "--stat", "even-n"]);
    assert_eq!(stdout(&o), "source,name,n,simplices,cocycle,solvable,period_free\n");
}

#[test]
fn bounds_experiment_lists_chain_values() {
    let o = run(&["experiment", "--stat", "bounds", &data("polygon_chain.json"), "--generate", "2", "--seed", "3"]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[1].ends_with("six-three-two,,-1/36,0.027778"));
    let again = stdout(&run(&[
        "experiment",
        "--stat",
        "bounds",
        &data("polygon_chain.json"),
        "--generate",
        "2",
        "--seed",
        "3",
    ]));
    assert_eq!(out, again);
}

#[test]
fn even_n_experiment_reports_solvability() {
    let o = run(&["experiment", "--stat", "even-n", &data("tower_n2.json")]);
    let out = stdout(&o);
    let row = out.lines().nth(1).unwrap();
    assert!(row.ends_with("tower/system,2,1,yes,yes,yes"), "{row}");
}

#[test]
fn data_files_are_canonical() {
    for entry in std::fs::read_dir(common::data("")).unwrap() {
        let path = entry.unwrap().path();
        let o = run(&["canon", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), std::fs::read_to_string(&path).unwrap(), "{}", path.display());
    }
    assert!(Path::new(&data("hopf_bundle.json")).exists());
}
