use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use clap::Parser;
use lieforge_cli::{run, RunConfig, EXIT_FAIL, EXIT_INPUT, EXIT_OK};
use serde_json::Value;
use tempfile::TempDir;

const TFIM2: &str = "qubits 2\ngen zz : 1.0 ZZ\ngen x1 : 1.0 XI\ngen x2 : 1.0 IX\n";
const DIPOLE: &str = "qubits 2\ngen A1 : 2.0 ZZ + -1.0 XX + -1.0 YY\ngen A2 : 1.0 XI + -1.0 YI + 1.0 IX + -1.0 IY\n";
const HEISENBERG: &str = "qubits 2\ngen B1 : 1.0 XX + 1.0 YY + 1.0 ZZ\n";
const DISJOINT: &str = "qubits 3\ngen a : 1.0 XII\ngen b : 1.0 YII\ngen c : 1.0 IXI\ngen d : 1.0 IYI\ngen e : 1.0 IIZ\n";
const ALIGNED: &str = "qubits 2\ngen a : 1.0 XI + 1.0 IX\ngen b : 1.0 YI\ngen c : 1.0 IY\n";
// i·(I ⊗ X) in matrix JSON.
const FILTER_IX: &str = r#"{"dim": 4, "re": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]], "im": [[0,1,0,0],[1,0,0,0],[0,0,0,1],[0,0,1,0]]}"#;

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.path().join(name);
        fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }
}

fn lieforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lieforge")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn closure_of_two_site_ising() {
    let d = Dir::new();
    let out = lieforge(&["closure", "--in", s(&d.file("tfim2.gens", TFIM2))]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["dim"], 6);
    assert_eq!(v["kind"], "symbolic");
    assert_eq!(v["basis"].as_array().unwrap().len(), 6);
    assert!(v["tolerances"]["rank_tol"].is_number());
}

#[test]
fn closure_with_cyclicity_search() {
    let d = Dir::new();
    let out = lieforge(&["closure", "--in", s(&d.file("t.gens", TFIM2)), "--cyclicity", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["cyclicity"]["depth_budget"], 4);
}

#[test]
fn compose_dipole_and_heisenberg() {
    let d = Dir::new();
    let a = d.file("a.gens", DIPOLE);
    let b = d.file("b.gens", HEISENBERG);
    let out = lieforge(&["compose", "--blocks", s(&a), s(&b)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["composed_dim"], 5);
    assert_eq!(v["qubit_cost"], 3);
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn overlap_of_contained_generators_is_one() {
    let d = Dir::new();
    let p = d.file("p.gens", DIPOLE);
    let q = d.file("q.gens", "qubits 2\ngen A1 : 2.0 ZZ + -1.0 XX + -1.0 YY\n");
    let out = lieforge(&["overlap", "--p", s(&p), "--q", s(&q)]);
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out)["overlap"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn invariance_table_as_csv() {
    let out = lieforge(&["invariance", "--n-list", "2,3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,variant,generator_count,dim,expected_dim,full");
    assert_eq!(lines.len(), 5);
    assert!(lines[1..].iter().all(|l| l.ends_with(",true")));
}

#[test]
fn reduce_writes_report_and_aprime() {
    let d = Dir::new();
    let a = d.file("a.gens", DISJOINT);
    let ap = d.path("aprime.gens");
    let out = lieforge(&["reduce", "--in", s(&a), "--targets", "1", "--aprime-out", s(&ap)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["dim_closure_aprime"], 3);
    assert_eq!(v["decomposition"]["center_dim"], 1);
    let back = lieforge_core::GeneratorSet::read(&ap).unwrap();
    assert_eq!(back.dim(), 8);
    assert_eq!(back.len(), v["aprime"].as_array().unwrap().len());
}

#[test]
fn aligned_filter_fails_with_status_one() {
    let d = Dir::new();
    let a = d.file("a.gens", ALIGNED);
    let f = d.file("f.json", FILTER_IX);
    let out = lieforge(&["reduce", "--in", s(&a), "--targets", "0", "--filter", s(&f)]);
    assert_eq!(out.status.code(), Some(i32::from(EXIT_FAIL)));
    let v = json(&out);
    assert_eq!(v["verdict"], "fail");
    assert_eq!(v["dim_closure_aprime"], 1);
}

#[test]
fn oscillator_mode() {
    let out = lieforge(&["reduce", "--modes", "1", "--oscillators", "2", "--d-trunc", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["aprime"].as_array().unwrap().len(), 3);
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn trotter_json_and_csv() {
    let d = Dir::new();
    let csv = d.path("grid.csv");
    let out = lieforge(&[
        "trotter", "--n-list", "2", "--alpha-list", "0.1,0.2", "--t-list", "0.1,0.2", "--csv", s(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["points"].as_array().unwrap().len(), 4);
    assert_eq!(v["dla_dims"][0]["tfim_dim"], 6);
    assert!(v["tolerances"].is_object());
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("n,alpha,t,err_apx,"));
}

#[test]
fn parse_error_names_the_line() {
    let d = Dir::new();
    let bad = d.file("bad.gens", "qubits 2\ngen g : 1.0 ZZ\ngen h : 1.0 ZZZ\n");
    let out = lieforge(&["closure", "--in", s(&bad)]);
    assert_eq!(out.status.code(), Some(i32::from(EXIT_INPUT)));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn empty_and_missing_inputs() {
    let d = Dir::new();
    let empty = d.file("empty.gens", "");
    let out = lieforge(&["closure", "--in", s(&empty)]);
    assert_eq!(out.status.code(), Some(i32::from(EXIT_INPUT)));
    assert!(String::from_utf8(out.stderr).unwrap().contains("no generators"));
    let out = lieforge(&["closure", "--in", s(&d.path("absent.gens"))]);
    assert_eq!(out.status.code(), Some(i32::from(EXIT_INPUT)));
}

#[test]
fn duplicate_names_rejected() {
    let d = Dir::new();
    let f = d.file("dup.gens", "qubits 1\ngen g : 1.0 X\ngen g : 1.0 Y\n");
    let out = lieforge(&["closure", "--in", s(&f)]);
    assert_eq!(out.status.code(), Some(i32::from(EXIT_INPUT)));
}

#[test]
fn bad_tolerance_is_an_input_error() {
    let d = Dir::new();
    let f = d.file("t.gens", TFIM2);
    let out = lieforge(&["closure", "--in", s(&f), "--rank-tol", "-1"]);
    assert_eq!(out.status.code(), Some(i32::from(EXIT_INPUT)));
}

#[test]
fn csv_refused_for_json_reports() {
    let d = Dir::new();
    let f = d.file("t.gens", TFIM2);
    let out = lieforge(&["closure", "--in", s(&f), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(i32::from(EXIT_INPUT)));
}

#[test]
fn dense_limit_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_lieforge"))
        .args(["reduce", "--modes", "1", "--oscillators", "2", "--d-trunc", "8"])
        .env("LIEFORGE_DENSE_LIMIT", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(i32::from(EXIT_INPUT)));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("64") && err.contains("16"), "{err}");
}

#[test]
fn same_seed_same_bytes() {
    let d = Dir::new();
    let a = d.file("a.gens", DISJOINT);
    let args = ["reduce", "--in", s(&a), "--targets", "0,1", "--seed", "9"];
    let first = lieforge(&args);
    let second = lieforge(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn output_file_matches_stdout() {
    let d = Dir::new();
    let f = d.file("t.gens", TFIM2);
    let out_path = d.path("report.json");
    let via_file = lieforge(&["closure", "--in", s(&f), "--out", s(&out_path)]);
    assert_eq!(via_file.status.code(), Some(0));
    assert!(via_file.stdout.is_empty());
    let via_stdout = lieforge(&["closure", "--in", s(&f)]);
    assert_eq!(fs::read(&out_path).unwrap(), via_stdout.stdout);
}

#[test]
fn library_entry_point() {
    let d = Dir::new();
    let f = d.file("t.gens", TFIM2);
    let cfg = RunConfig::try_parse_from(["lieforge", "closure", "--in", s(&f)]).unwrap();
    let o = run(&cfg).unwrap();
    assert_eq!(o.status, EXIT_OK);
    assert!(o.output.contains("\"dim\": 6"));
}
