//! End-to-end runs of the `ergopt` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ergopt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ergopt")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn maximize_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let pot = write(dir.path(), "p.json", r#"{"depth":1,"values":{"0":0,"1":-1}}"#);
    let out = dir.path().join("out");
    let o = ergopt(&["maximize", "--potential", &pot, "--max-period", "6", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(out.join("maximize.json")).unwrap()).unwrap();
    assert_eq!(v["m0"].as_f64().unwrap(), 0.0);
    assert!(v.to_string().contains("\"0\""));
}

#[test]
fn missing_input_is_a_usage_error_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let missing = dir.path().join("nope.json");
    let o = ergopt(&["maximize", "--potential", missing.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn unknown_subcommand_exits_one() {
    assert_eq!(ergopt(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn invalid_potential_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let pot = write(dir.path(), "p.json", r#"{"depth":1,"values":{"0":"x"}}"#);
    let o = ergopt(&["maximize", "--potential", &pot]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn genericity_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = ergopt(&["genericity", "--samples", "20", "--seed", "3", "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        fs::read(out.join("genericity.csv")).unwrap()
    };
    let a = run("a");
    assert_eq!(a, run("b"));
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("sample_id,m0,unique_flag,period,gap"));
    assert_eq!(text.lines().count(), 21);
}

#[test]
fn zerotemp_energy_approaches_m0() {
    let dir = tempfile::tempdir().unwrap();
    let pot = write(dir.path(), "p.json", r#"{"depth":1,"values":{"0":0.3,"1":-0.5}}"#);
    let o = ergopt(&["zerotemp", "--potential", &pot, "--t", "1,4,16,64"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let last = text.lines().filter(|l| !l.trim().is_empty()).last().unwrap().to_owned();
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "energy").expect("energy column");
    let energy: f64 = last.split(',').nth(col).unwrap().parse().unwrap();
    assert!((energy - 0.3).abs() < 1e-6, "{energy}");
}

#[test]
fn circle_encode_of_doubling_is_flat() {
    let dir = tempfile::tempdir().unwrap();
    let map = write(dir.path(), "m.json", r#"{"kind":"builtin","name":"doubling"}"#);
    let out = dir.path().join("out");
    let o = ergopt(&["circle-encode", "--map", &map, "--depth", "4", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(out.join("potential.json")).unwrap()).unwrap();
    for (_, x) in v["values"].as_object().unwrap() {
        assert!((x.as_f64().unwrap() + std::f64::consts::LN_2).abs() < 1e-9);
    }
}
