use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn pertinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pertinv")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

const HOPF: &str = r#"{"curves": [
  {"id": "a", "vertices": [[-1, -1, 0], [1, -1, 0], [1, 1, 0], [-1, 1, 0]]},
  {"id": "b", "vertices": [[0, 0, -1], [2, 0, -1], [2, 0, 1], [0, 0, 1]]}
]}"#;

const SQUARES: &str = r#"{"curves": [
  {"id": "p", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]},
  {"id": "q", "vertices": [["1/2", 0], ["3/2", 0], ["3/2", 1], ["1/2", 1]]}
]}"#;

#[test]
fn tree_count() {
    let o = pertinv(&["trees", "count", "--n", "4", "--labels", "zero"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "45");
    let o = pertinv(&["--machine", "trees", "count", "--n", "3"]);
    assert_eq!(stdout(&o).trim(), "count=11");
}

#[test]
fn tree_list_and_audit() {
    let o = pertinv(&["--machine", "trees", "list", "--n", "1"]);
    assert!(stdout(&o).contains("count=1\ntree=(0: * *)"), "{}", stdout(&o));
    let o = pertinv(&["--machine", "trees", "verify-gf", "--n", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("label_min.2.matches_literal=true"));
}

#[test]
fn polynomial_solve() {
    let o = pertinv(&["--machine", "solve", "poly", "--coeffs", "1,1", "--y", "1", "--order", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x.0=1\nx.1=-1\nx.2=2\nx.3=-5\nx.4=14\n");
    let o = pertinv(&["solve", "poly", "--coeffs", "0,1", "--y", "1", "--order", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hierarchy_modes() {
    let args = ["--machine", "hierarchy", "toy", "--kappa", "2", "--g", "1", "--j", "3", "--order", "4"];
    let o = pertinv(&args);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("S.0.direct=-9/4"));
    assert!(stdout(&o).contains("agrees=true"));
    let mut literal = args.to_vec();
    literal.extend(["--weights", "literal"]);
    let o = pertinv(&literal);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("agrees=false"));
}

#[test]
fn hodge_commands() {
    let o = pertinv(&["--machine", "hodge", "check", "--fixture", "torus"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("harmonic_dims=1,2,1"));
    let o = pertinv(&["--machine", "hodge", "solve-d", "--fixture", "triangle", "--cup", "--order", "3", "--b", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("residual_zero=true"));
    // h^1 of the circle is nonzero
    let o = pertinv(&["hodge", "solve-laplace", "--fixture", "circle:3", "--order", "2", "--b", "1,0,0"]);
    assert_eq!(o.status.code(), Some(4));
    let doc = file(r#"{"dims": [1, 1, 1], "d": [[[1]], [[1]]]}"#);
    let o = pertinv(&["hodge", "check", "--complex", path(&doc)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bf_config() {
    let o = pertinv(&["--machine", "bf", "config", "--points", "0,1,3,7", "--trials", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("eom_solved=true") && out.contains("s_os_invariant=true") && out.contains("action_invariant=true"));
    let o = pertinv(&["bf", "config", "--points", "0,1,0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn linking_numbers() {
    let f = file(HOPF);
    let o = pertinv(&["link", "lk", "--curves", path(&f), "--i", "a", "--j", "b"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim().parse::<i64>().unwrap().abs(), 1);
    let o = pertinv(&["--machine", "link", "lk", "--curves", path(&f), "--i", "0", "--j", "1", "--method", "quad"]);
    let v: f64 = stdout(&o).trim().strip_prefix("lk=").unwrap().parse().unwrap();
    assert!((v.abs() - 1.0).abs() < 1e-2);
}

#[test]
fn intersecting_curves_exit_3() {
    let f = file(r#"{"curves": [
      {"id": "a", "vertices": [[0, 0, 0], [2, 0, 0], [2, 2, 0]]},
      {"id": "b", "vertices": [[1, -1, 0], [1, 1, 0], [1, 0, 1]]}
    ]}"#);
    let o = pertinv(&["link", "lk", "--curves", path(&f), "--i", "a", "--j", "b"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn malformed_file_exit_2_with_offset() {
    let f = file("{\"curves\": [\n  {\"id\": \"a\", \"vertices\": [[0, 0], [1 0]]}\n]}");
    let o = pertinv(&["planar", "j", "--curves", path(&f), "--i", "a", "--j", "a"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("byte "), "{}", stderr(&o));
    let o = pertinv(&["planar", "j", "--curves", "/nonexistent/curves.json", "--i", "a", "--j", "a"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn planar_invariants() {
    let f = file(SQUARES);
    let o = pertinv(&["planar", "j", "--curves", path(&f), "--i", "p", "--j", "q"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1/2");
    let charges = file(r#"{"dim": 1, "tr": [[1]], "charges": [[1], [1]]}"#);
    let o = pertinv(&["--machine", "planar", "s0", "--curves", path(&f), "--charges", path(&charges)]);
    assert_eq!(stdout(&o).trim(), "s0=3");
    let one = file(r#"{"dim": 1, "tr": [[1]], "charges": [[1]]}"#);
    let o = pertinv(&["planar", "s0", "--curves", path(&f), "--charges", path(&one)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn planar_transform_round_trip() {
    let f = file(SQUARES);
    let o = pertinv(&["planar", "transform", "--curves", path(&f), "--map", "shear:2"]);
    assert_eq!(o.status.code(), Some(0));
    let moved = file(&stdout(&o));
    let o = pertinv(&["planar", "j", "--curves", path(&moved), "--i", "p", "--j", "q"]);
    assert_eq!(stdout(&o).trim(), "1/2");
    let o = pertinv(&["planar", "transform", "--curves", path(&f), "--map", "twist:1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn non_generic_planar_curve_exit_3() {
    let f = file(r#"{"curves": [{"id": "s", "vertices": [[0, 0], [2, 0], [1, 0], [1, 1]]}]}"#);
    let o = pertinv(&["planar", "j", "--curves", path(&f), "--i", "s", "--j", "s"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn thread_setting() {
    let o = Command::new(env!("CARGO_BIN_EXE_pertinv"))
        .args(["trees", "count", "--n", "2"])
        .env("PERTINV_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(stdout(&o).trim(), "3");
    let o = Command::new(env!("CARGO_BIN_EXE_pertinv"))
        .args(["trees", "count", "--n", "2"])
        .env("PERTINV_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
