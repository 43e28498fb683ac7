#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub fn amalgam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amalgam"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

/// Documented invocations and the golden file holding their `--json`
/// output.
pub const GOLDEN: &[(&str, &[&str])] = &[
    (
        "reduce_dense",
        &["reduce", "h1(7/5)", "--prime", "5", "--instance", "dense"],
    ),
    (
        "reduce_word",
        &["reduce", "h1(1/5) h0(1/5) h1(-1/5) h0(-1/5)"],
    ),
    (
        "phi_commutator",
        &["phi", "[h1(1/5), h0(1/5)]", "--prime", "5"],
    ),
    ("psi_sum", &["psi", "h0(3/5) h2(1/25)"]),
    ("level_top", &["level", "h3(1/5)"]),
    ("level_base", &["level", "h2(25)"]),
    ("eq_base", &["eq", "h1(5)", "h0(5)"]),
    (
        "reduce_heisenberg",
        &[
            "reduce",
            "[h1(1,0,0), h0(0,1,0)]",
            "--instance",
            "heisenberg",
            "--prime",
            "3",
        ],
    ),
    (
        "reduce_cyclic",
        &[
            "reduce",
            "h2(3) h1(1) h0(6)",
            "--instance",
            "cyclic",
            "--prime",
            "2",
            "--length",
            "3",
        ],
    ),
    (
        "escape_dense",
        &["witness", "escape", "--h", "h0(1/5)", "--k", "3"],
    ),
    (
        "escape_base",
        &["witness", "escape", "--h", "h0(25)", "--k", "1"],
    ),
    (
        "derived_dense",
        &["witness", "derived", "--depth", "2", "--k", "1"],
    ),
    ("check_lemma21", &["check", "lemma21", "--samples", "500"]),
    (
        "check_axioms_cyclic",
        &[
            "check",
            "axioms",
            "--samples",
            "500",
            "--instance",
            "cyclic",
            "--prime",
            "2",
        ],
    ),
    (
        "check_instance_heisenberg",
        &[
            "check",
            "instance",
            "--instance",
            "heisenberg",
            "--prime",
            "3",
        ],
    ),
];

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.json"))
}

/// Runs a golden invocation with `--json --stable`.
pub fn golden_run(args: &[&str]) -> String {
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--json", "--stable"]);
    stdout(&amalgam(&full))
}
