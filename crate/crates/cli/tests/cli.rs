use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn cellcov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cellcov")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

struct Files {
    _dir: TempDir,
    g: PathBuf,
    z2: PathBuf,
    e1: PathBuf,
    bad: PathBuf,
}

fn files() -> Files {
    let dir = TempDir::new().unwrap();
    let g = write(
        dir.path(),
        "g.json",
        r#"{"ambient_rank": 2, "generators": [{"vector": ["1","0"]}, {"vector": ["0","1"]}, {"vector": ["1","1"], "inverted_primes": [3]}]}"#,
    );
    let z2 = write(dir.path(), "z2.json", r#"{"ambient_rank": 2, "generators": [{"vector": ["1","0"]}, {"vector": ["0","1"]}]}"#);
    let e1 = write(dir.path(), "e1.json", r#"{"ambient_rank": 2, "generators": [{"vector": ["1","0"]}]}"#);
    let bad = write(dir.path(), "bad.json", "{\"ambient_rank\": 1,\n \"generators\": [{\"vector\": [\"1\"], \"inverted_primes\": [4]}]}");
    Files { _dir: dir, g, z2, e1, bad }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn member_of_localized_line() {
    let f = files();
    let o = cellcov(&["member", s(&f.g), "--vector", "1/9,1/9", "--cross-check"]);
    assert_eq!(code(&o), 0);
    let o = cellcov(&["member", s(&f.g), "--vector", "1/3,0"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn cover_decide_rejects_coordinate_kernel() {
    let f = files();
    let o = cellcov(&["--json", "cover-decide", "--group", s(&f.z2), "--kernel", s(&f.e1)]);
    assert_eq!(code(&o), 1);
    let r = json_of(&o);
    assert_eq!(r["verdict"], "fail");
    let conds = r["certificate"]["conditions"].as_array().unwrap();
    assert!(conds.iter().any(|c| c["status"] == "fail" && !c["witness"].is_null()));
}

#[test]
fn composite_inverted_prime_is_schema_error() {
    let f = files();
    let o = cellcov(&["info", s(&f.bad)]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn missing_file_is_input_error() {
    let o = cellcov(&["info", "/nonexistent/group.json"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn emitted_groups_reparse() {
    let f = files();
    let o = cellcov(&["--json", "info", s(&f.g)]);
    assert_eq!(code(&o), 0);
    let r = json_of(&o);
    let dir = TempDir::new().unwrap();
    let local = write(dir.path(), "local.json", &r["result"]["group"].to_string());
    let gens = write(dir.path(), "gens.json", &r["result"]["generators"].to_string());
    for p in [&local, &gens] {
        let again = json_of(&cellcov(&["--json", "info", s(p)]));
        assert_eq!(again["result"]["group"], r["result"]["group"]);
    }
}

#[test]
fn text_and_json_verdicts_agree() {
    let f = files();
    let cases: Vec<Vec<&str>> = vec![
        vec!["member", s(&f.g), "--vector", "1/9,1/9"],
        vec!["member", s(&f.g), "--vector", "1/2,0"],
        vec!["cover-decide", "--group", s(&f.z2), "--kernel", s(&f.e1)],
        vec!["cover-cc7", "--group", s(&f.z2), "--kernel", s(&f.e1)],
        vec!["end", s(&f.g)],
    ];
    for args in cases {
        let text = cellcov(&args);
        let mut j = vec!["--json"];
        j.extend(&args);
        let json = cellcov(&j);
        assert_eq!(code(&text), code(&json), "{args:?}");
        let word = json_of(&json)["verdict"].as_str().unwrap().to_string();
        let last = String::from_utf8_lossy(&text.stdout).lines().last().unwrap().to_string();
        assert_eq!(last, format!("verdict: {word}"), "{args:?}");
    }
}

#[test]
fn report_dir_receives_json() {
    let f = files();
    let dir = TempDir::new().unwrap();
    let o = cellcov(&["--report-dir", s(dir.path()), "end", s(&f.g), "--cross-check"]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("end.json")).unwrap()).unwrap();
    assert_eq!(r["tool"], "cellcov");
    assert_eq!(r["result"]["cross_check"]["agree"], true);
    assert_eq!(r["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn hom_cross_check_agrees() {
    let f = files();
    let o = cellcov(&["--json", "--cross-check", "hom", s(&f.e1), s(&f.g)]);
    assert_eq!(code(&o), 0);
    assert_eq!(json_of(&o)["result"]["cross_check"]["agree"], true);
}

#[test]
fn deterministic_output() {
    let f = files();
    let a = cellcov(&["--json", "end", s(&f.g)]);
    let b = cellcov(&["--json", "end", s(&f.g)]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn fk_summand_splits() {
    let o = cellcov(&["--json", "fk-summand", "--rank", "4", "--gens", "1,2,0,0;0,3,0,0"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn rigid_group_scalars() {
    let o = cellcov(&["--json", "rigid", "-k", "2", "--spine", "7,11,13", "--localize", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json_of(&o)["result"]["end_scalar_primes"], serde_json::json!([2]));
}

#[test]
fn demo_theorem1_quotients_agree() {
    let o = cellcov(&["--json", "demo-theorem1", "-k", "3"]);
    let r = json_of(&o);
    let conds = r["certificate"]["conditions"].as_array().unwrap();
    let m = conds.iter().find(|c| c["label"] == "thm.m_independent").unwrap();
    assert_eq!(m["status"], "pass");
    let expected = if r["verdict"] == "pass" { 0 } else { 1 };
    assert_eq!(code(&o), expected);
    assert_eq!(r["result"]["runs"].as_array().unwrap().len(), 3);
}

#[test]
fn unknown_field_rejected() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "x.json", r#"{"ambient_rank": 1, "generators": [], "extra": 1}"#);
    assert_eq!(code(&cellcov(&["info", s(&p)])), 2);
}

#[test]
fn json_error_body() {
    let o = cellcov(&["--json", "member", "/nonexistent.json", "--vector", "1"]);
    assert_eq!(code(&o), 2);
    let r = json_of(&o);
    assert_eq!(r["exit_code"], 2);
}
