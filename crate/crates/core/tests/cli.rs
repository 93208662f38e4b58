use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("prolim-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, file: &str, body: &str) -> String {
    let p = dir.join(file);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn prolim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prolim")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

const TETRA: &str = r#"{"vertices":[0,1,2,3],"facets":[[0,1,2],[0,1,3],[0,2,3],[1,2,3]]}"#;
const TIMES_TWO: &str = r#"{"groups":[{"rank":1,"torsion":[]}],"maps":[],"tail":{"type":"periodic","cycle":[{"rows":1,"cols":1,"entries":[[2]]}]}}"#;

#[test]
fn homology_of_tetrahedron_boundary() {
    let dir = workdir("homology");
    let tetra = write(&dir, "tetra.json", TETRA);
    let out = prolim(&["homology", "--complex", &tetra, "--degree", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "homology");
    assert_eq!(v["result"], serde_json::json!({"rank": 1, "torsion": []}));
    assert_eq!(v["flags"]["depth"], 8);
    let h1 = json(&prolim(&["homology", "--complex", &tetra, "--degree", "1"]));
    assert_eq!(h1["result"], serde_json::json!({"rank": 0, "torsion": []}));
}

#[test]
fn lim1_of_doubling_tower() {
    let dir = workdir("lim1");
    let t = write(&dir, "z_times2.json", TIMES_TWO);
    let out = prolim(&["tower", "lim1", "--tower", &t]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["kind"], "ProChain");
    assert_eq!(v["result"]["supernatural"], "2^inf");
}

#[test]
fn classify_solenoid_reports_three_booleans() {
    let dir = workdir("classify");
    let a = write(&dir, "seq1.json", r#"{"prefix":[1,3],"cycle":[2]}"#);
    let b = write(&dir, "seq2.json", r#"{"prefix":[1,9],"cycle":[2]}"#);
    let v = json(&prolim(&["classify-solenoid", "--a", &a, "--b", &b]));
    let r = &v["result"];
    assert_eq!(r["baer_equivalent"], false);
    assert_eq!(r["steenrod_isomorphic"], true);
    assert_eq!(r["homeomorphic"], false);
}

#[test]
fn props_suites_and_exit_codes() {
    let out = prolim(&["props", "snf", "--trials", "1000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["status"], "pass");

    let out = prolim(&["props", "e0-identity", "--depth", "10"]);
    assert_eq!(out.status.code(), Some(0));

    let out = prolim(&["props", "snf", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["trials"], 0);

    let out = prolim(&["props", "intersection", "--trials", "200", "--seed", "6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["result"]["failure"]["witness"].is_object());
}

#[test]
fn reruns_are_byte_identical() {
    let a = prolim(&["props", "adic-divisibility", "--trials", "50", "--seed", "11"]);
    let b = prolim(&["props", "adic-divisibility", "--trials", "50", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
    let c = prolim(&["props", "intersection", "--trials", "200", "--seed", "3"]);
    let d = prolim(&["props", "intersection", "--trials", "200", "--seed", "3"]);
    assert_eq!(c.stdout, d.stdout);
    assert_eq!(c.status.code(), d.status.code());
}

#[test]
fn parse_errors_name_file_and_field() {
    let dir = workdir("parse");
    let bad = write(&dir, "bad.json", r#"{"vertices":[0],"facts":[]}"#);
    let out = prolim(&["homology", "--complex", &bad, "--degree", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json") && err.contains("facts"), "{err}");

    let nested = write(&dir, "nested.json", r#"{"prefix":[1,"x"],"cycle":[2]}"#);
    let out = prolim(&["classify-solenoid", "--a", &nested, "--b", &nested]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("nested.json") && err.contains("prefix[1]"), "{err}");

    let out = prolim(&[
        "homology",
        "--complex",
        &dir.join("missing.json").to_string_lossy(),
        "--degree",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_flags_are_rejected_before_dispatch() {
    let dir = workdir("flags");
    let tetra = write(&dir, "tetra.json", TETRA);
    for args in [
        vec!["--depth", "0", "homology", "--complex", &tetra, "--degree", "0"],
        vec!["--prime-bound", "1", "homology", "--complex", &tetra, "--degree", "0"],
        vec!["props", "no-such-suite"],
    ] {
        let out = prolim(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn text_output() {
    let dir = workdir("text");
    let tetra = write(&dir, "tetra.json", TETRA);
    let out = prolim(&["--text", "homology", "--complex", &tetra, "--degree", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.lines().any(|l| l == "result.rank = 1"), "{s}");
    assert!(s.lines().any(|l| l == "command = homology"), "{s}");
}

#[test]
fn adic_and_family_commands() {
    let dir = workdir("adic");
    let base = write(&dir, "base.json", r#"{"prefix":[1],"cycle":[3]}"#);
    let out = prolim(&["adic", "divide", "--base", &base, "--x", "5", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["certified"], true);

    let out = prolim(&["family", "--k", "5", "--base", "2"]);
    assert_eq!(out.status.code(), Some(0));
}
