//! Byte-compares CLI stdout and exit codes against `tests/golden/*.out`.
//! Set `CWKIT_BLESS=1` to rewrite the expected files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn cwkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cwkit")).args(args).current_dir(dir()).output().expect("binary runs")
}

fn golden(name: &str, args: &[&str], code: i32) {
    let out = cwkit(args);
    let stdout = String::from_utf8(out.stdout).expect("utf-8 output");
    assert_eq!(out.status.code(), Some(code), "{name}: stderr {}", String::from_utf8_lossy(&out.stderr));
    let path = dir().join(format!("{name}.out"));
    if std::env::var_os("CWKIT_BLESS").is_some() {
        std::fs::write(&path, &stdout).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(stdout, want, "{name}");
}

#[test]
fn check() {
    golden("check_k4", &["check", "--free", "diamond,P1+2P2", "pattern:K4"], 0);
    golden("check_c5", &["check", "--free", "claw,P4", "pattern:C5"], 1);
    golden("check_graph6", &["check", "--free", "K3", "inputs/c5.g6"], 0);
}

#[test]
fn classify() {
    golden("classify_k3_s123", &["classify", "--pair", "K3", "S123"], 0);
    golden("classify_diamond", &["classify", "--pair", "diamond", "P1+2P2"], 0);
    golden("classify_c4", &["classify", "--pair", "C4", "C4"], 0);
    golden("classify_colouring", &["classify", "--colouring", "P1+2P2"], 0);
    golden("classify_scan", &["classify", "--scan", "4"], 0);
    golden("classify_too_large", &["classify", "--pair", "P9", "K3"], 2);
}

#[test]
fn census() {
    golden("census_triangle_free", &["census", "--n", "6", "--free", "K3"], 0);
    golden("census_list", &["census", "--n", "4", "--free", "claw,K3", "--list"], 0);
}

#[test]
fn decompose() {
    golden("decompose_p6", &["decompose", "--expr", "pattern:P6"], 0);
    golden("decompose_p7", &["decompose", "pattern:P7"], 1);
    golden("decompose_three", &["decompose", "--mode", "three", "--parts", "0,1,2,0,1,2", "--expr", "inputs/three_parts.txt"], 1);
    golden("decompose_generated", &["decompose", "--mode", "three", "--parts", "2,1,2,2,0,2,0,0", "--expr", "inputs/decomposable.txt"], 0);
}

#[test]
fn expressions() {
    golden("expr_build_c5", &["expr", "build", "pattern:C5"], 0);
    golden("expr_build_cycle", &["expr", "build", "--method", "max-degree-2", "pattern:C7"], 0);
    golden("expr_eval", &["expr", "eval", "inputs/p2.expr"], 0);
    golden("expr_validate", &["expr", "validate", "inputs/p2.expr", "pattern:P2"], 0);
    golden("expr_invalid", &["expr", "validate", "inputs/p2.expr", "pattern:2P1"], 1);
}

#[test]
fn colour() {
    golden("colour_petersen", &["colour", "pattern:petersen"], 0);
    golden("colour_expression", &["colour", "--method", "expression", "pattern:C5"], 0);
    golden("colour_certificate", &["colour", "--method", "certificate", "inputs/diamond_free.txt"], 0);
    golden("colour_not_free", &["colour", "--method", "certificate", "pattern:diamond"], 1);
}

#[test]
fn reduce_and_verify() {
    golden("reduce_odd_cycle", &["reduce", "--odd-cycle", "pattern:C7"], 0);
    golden("reduce_diamond", &["reduce", "--diamond", "inputs/diamond_free.txt"], 0);
    golden("reduce_triangle_free", &["reduce", "--triangle-free", "P1+P5", "pattern:C5"], 0);
    golden("verify_ok", &["verify", "inputs/c7.cert", "pattern:C7"], 0);
    golden("verify_wrong_graph", &["verify", "inputs/c7.cert", "pattern:P7"], 1);
    golden("reduce_missing_pipeline", &["reduce", "pattern:C7"], 2);
}

#[test]
fn gen() {
    golden("gen_decomposable", &["gen", "mode=totally-k-decomposable", "k=3", "n=8", "seed=2"], 0);
    golden("gen_free", &["gen", "--spec", "inputs/free.spec", "--count", "3", "--format", "graph6"], 0);
    golden("gen_unknown_key", &["gen", "mode=basic", "p=1", "q=2"], 2);
}

#[test]
fn emitted_certificates_verify() {
    let cert = std::env::temp_dir().join(format!("cwkit-golden-{}.cert", std::process::id()));
    let cert_arg = cert.to_str().unwrap();
    let out = cwkit(&["reduce", "--diamond", "inputs/diamond_free.txt", "--emit-cert", cert_arg]);
    assert_eq!(out.status.code(), Some(0));
    let out = cwkit(&["verify", cert_arg, "inputs/diamond_free.txt"]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::remove_file(cert).unwrap();
}
