use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const FIELD: &str = r#"{"model":"mixed","p":3,"d":2,"modulus":"g^2+1","precision":12}"#;
const NONIC: &str = r#"{"degree":9,"terms":{"2":"pi","3":"pi","6":"pi","9":"pi"}}"#;
const TWO_INDEX: &str = r#"{"degree":9,"terms":{"1":"3*(g)","9":"3*(g+1) + 27"}}"#;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        let f = Fixture { dir: TempDir::new().unwrap() };
        f.write("field.json", FIELD);
        f.write("nonic.json", NONIC);
        f.write("two.json", TWO_INDEX);
        f
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.path(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_ramify")).current_dir(self.dir.path()).args(args).output().unwrap()
    }
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn read(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn indices_of_three_index_nonic() {
    let fx = Fixture::new();
    let out = fx.run(&["indices", "--field", "field.json", "--poly", "nonic.json"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["tilde"], serde_json::json!([7, 3, 0]));
    assert_eq!(v["distinct"], 3);
    let table = fx.run(&["indices", "--field", "field.json", "--poly", "nonic.json", "--format", "table"]);
    assert!(String::from_utf8(table.stdout).unwrap().contains("tilde_j"));
}

#[test]
fn classify_counts_and_lists() {
    let fx = Fixture::new();
    let out = fx.run(&["classify", "--field", "field.json", "--k", "2", "--i0", "8", "--count-only"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "16");
    let listing = fx.run(&["classify", "--field", "field.json", "--k", "2", "--i0", "8"]);
    let lines: Vec<Value> =
        String::from_utf8(listing.stdout.clone()).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 16);
    assert_eq!(lines.iter().filter(|v| v["galois"] == true).count(), 9);
    let parallel = fx.run(&["classify", "--field", "field.json", "--k", "2", "--i0", "8", "--jobs", "3"]);
    assert_eq!(parallel.stdout, listing.stdout);
    let again = fx.run(&["classify", "--field", "field.json", "--k", "2", "--i0", "8"]);
    assert_eq!(again.stdout, listing.stdout);
    let galois = fx.run(&["classify", "--field", "field.json", "--k", "2", "--i0", "8", "--galois-filter"]);
    assert_eq!(String::from_utf8(galois.stdout).unwrap().lines().count(), 9);
}

#[test]
fn equivalence_with_itself() {
    let fx = Fixture::new();
    let out = fx.run(&["equiv", "--field", "field.json", "--f", "two.json", "--g", "two.json", "--ell", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["equivalent"], true);
}

#[test]
fn reduce_writes_trace_and_is_deterministic() {
    let fx = Fixture::new();
    let args = ["reduce", "--field", "field.json", "--poly", "two.json", "--trace", "trace.json"];
    let out = fx.run(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let sf = stdout_json(&out);
    assert_eq!(sf["omega"], "2*g + 2");
    let trace = read(&fx.path("trace.json"));
    assert_eq!(trace["steps"].as_array().unwrap().len(), 27);
    assert_eq!(trace["certified_ell"], 28);
    assert_eq!(fx.run(&args).stdout, out.stdout);

    fx.write("form.json", &serde_json::to_string(&sf).unwrap());
    let g = fx.run(&["galois", "--field", "field.json", "--form", "form.json"]);
    assert!(g.status.success());
    assert_eq!(stdout_json(&g)["galois"], false);
    let from_poly = fx.run(&["galois", "--field", "field.json", "--poly", "two.json"]);
    assert_eq!(from_poly.stdout, g.stdout);
}

#[test]
fn minpoly_output_round_trips() {
    let fx = Fixture::new();
    let out = fx.run(&["minpoly", "--field", "field.json", "--poly", "nonic.json", "--expr", "X + (2*g)*X^3"]);
    assert!(out.status.success());
    fx.write("m.json", std::str::from_utf8(&out.stdout).unwrap());
    // the output embeds its field, so --field is optional
    let again = fx.run(&["minpoly", "--poly", "m.json", "--expr", "X"]);
    assert_eq!(again.stdout, out.stdout);
    let idx = fx.run(&["indices", "--poly", "m.json"]);
    assert_eq!(stdout_json(&idx)["indices"], serde_json::json!([7, 3, 0]));
}

#[test]
fn rho_values() {
    let fx = Fixture::new();
    let out = fx.run(&["rho", "--field", "field.json", "--poly", "nonic.json", "--ell", "1"]);
    let v = stdout_json(&out);
    assert_eq!(v["rho"]["1"], 1);
    assert_eq!(v["rho"]["9"], 2);
}

#[test]
fn exit_codes() {
    let fx = Fixture::new();
    let three = fx.run(&["reduce", "--field", "field.json", "--poly", "nonic.json"]);
    assert_eq!(three.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&three.stderr).contains("three or more"));
    let excluded = fx.run(&["classify", "--field", "field.json", "--k", "2", "--i0", "6"]);
    assert_eq!(excluded.status.code(), Some(2));
    let not_eisenstein = fx.write("bad.json", r#"{"degree":3,"terms":{"1":"1","3":"3"}}"#);
    let bad = fx.run(&["indices", "--field", "field.json", "--poly", not_eisenstein.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    fx.write("low.json", r#"{"model":"mixed","p":3,"d":2,"precision":5}"#);
    let low = fx.run(&["reduce", "--field", "low.json", "--poly", "two.json"]);
    assert_eq!(low.status.code(), Some(3));
    assert_eq!(fx.run(&["classify", "--bogus"]).status.code(), Some(64));
    assert_eq!(fx.run(&[]).status.code(), Some(64));
    assert_eq!(fx.run(&["--help"]).status.code(), Some(0));
}

#[test]
fn field_check_normalizes() {
    let fx = Fixture::new();
    let out = fx.run(&["field-check", "--field", "field.json"]);
    let v = stdout_json(&out);
    assert_eq!(v["modulus"], "g^2 + 1");
    assert_eq!(v["q"], 9);
    fx.write("reducible.json", r#"{"model":"equal","p":3,"d":2,"modulus":"g^2+2","precision":8}"#);
    assert_eq!(fx.run(&["field-check", "--field", "reducible.json"]).status.code(), Some(2));
}

#[test]
fn verify_command_passes() {
    let fx = Fixture::new();
    let out = fx.run(&["verify-paper", "--seed", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 8);
}
