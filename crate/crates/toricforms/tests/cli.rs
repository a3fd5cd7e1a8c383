//! Golden-file tests for the command line. Set `UPDATE_GOLDEN=1` to rewrite
//! the expected outputs after an intended change.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn data() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/cli")
}

/// Drops timing fields, which vary between runs.
fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsed");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_toricforms"))
        .args(args)
        .current_dir(data())
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn golden(name: &str, args: &[&str]) {
    let (code, stdout, _) = run(args);
    let body = match serde_json::from_str::<Value>(&stdout) {
        Ok(mut v) => {
            strip_timing(&mut v);
            serde_json::to_string_pretty(&v).unwrap() + "\n"
        }
        Err(_) => stdout,
    };
    let got = format!("exit: {code}\n{body}");
    let path = data().join("golden").join(format!("{name}.txt"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &got).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(got, want, "output of {args:?} differs from {}", path.display());
}

#[test]
fn fan_validate() {
    golden("fan_validate_ex48", &["fan", "validate", "ex48.json", "--json"]);
    golden("fan_validate_ex47", &["fan", "validate", "ex47.json", "--json"]);
    golden("fan_validate_p2", &["fan", "validate", "p2.json"]);
}

#[test]
fn fan_aut() {
    golden("fan_aut_ex48", &["fan", "aut", "ex48.json", "--json"]);
    golden("fan_aut_ex48_text", &["fan", "aut", "ex48.json"]);
    golden("fan_aut_p2", &["fan", "aut", "p2.json", "--json"]);
}

#[test]
fn fan_qproj() {
    golden("fan_qproj_ex48", &["fan", "qproj", "ex48.json", "--json"]);
    golden("fan_qproj_p2", &["fan", "qproj", "p2.json", "--json"]);
}

#[test]
fn classify() {
    golden("classify_ex48_real", &["classify", "--fan", "ex48.json", "--group", "Z2", "--context", "real", "--json"]);
    golden("classify_ex48_real_text", &["classify", "--fan", "ex48.json", "--group", "Z2", "--context", "real"]);
    golden("classify_ex48_cubic", &["classify", "--fan", "ex48.json", "--group", "Z3", "--context", "symbolic", "--json"]);
    golden("classify_p2_d6_doc", &["classify", "--fan", "p2.json", "--group", "d6.json", "--context", "trivial", "--json"]);
    golden("classify_ex47", &["classify", "--fan", "ex47.json", "--group", "Z2", "--context", "real", "--json"]);
}

#[test]
fn realforms() {
    golden("realforms_ex48", &["realforms", "--fan", "ex48.json", "--json"]);
    golden("realforms_p2", &["realforms", "--fan", "p2.json"]);
}

#[test]
fn similar() {
    golden("similar_identical", &["similar", "--family", "w9.json", "--family", "w9.json", "--json"]);
    golden("similar_distinct", &["similar", "--family", "swap.json", "--family", "minus.json", "--json"]);
    golden("similar_undecided", &["similar", "--family", "swap.json", "--family", "diag.json", "--json"]);
}

#[test]
fn cohomology() {
    golden("cohomology_w9", &["cohomology", "--family", "w9.json", "--json"]);
    golden("cohomology_w5_d6", &["cohomology", "--family", "w5.json", "--group", "d6.json", "--json"]);
    golden("cohomology_w5_text", &["cohomology", "--family", "w5.json"]);
}

#[test]
fn verify_paper() {
    golden("verify_paper", &["verify-paper", "--json"]);
}

#[test]
fn exit_codes() {
    // usage errors
    assert_eq!(run(&["classify", "--fan", "ex48.json", "--group", "Z2", "--context", "complex"]).0, 2);
    assert_eq!(run(&["fan", "aut", "missing.json"]).0, 2);
    assert_eq!(run(&["similar", "--family", "w9.json"]).0, 2);
    assert_eq!(run(&["cohomology", "--family", "w5.json", "--group", "Z2"]).0, 2);
    assert_eq!(run(&["similar", "--family", "w9.json", "--family", "w9.json", "--bound", "0"]).0, 2);
    // domain errors go to stderr only
    let (code, stdout, stderr) = run(&["fan", "aut", "ex47.json"]);
    assert_eq!(code, 1);
    assert!(stdout.is_empty());
    assert!(stderr.starts_with("error:"));
    // bound exhaustion
    assert_eq!(run(&["similar", "--family", "swap.json", "--family", "diag.json"]).0, 3);
    // the suite fails only on the two zero-sum fan criteria
    let (code, stdout, _) = run(&["verify-paper", "--seed", "7"]);
    assert_eq!(code, 1);
    assert!(stdout.contains("8 of 10 criteria pass"));
}
