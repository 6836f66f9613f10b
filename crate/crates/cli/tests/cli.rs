use std::process::{Command, Output};

use odecirc_cli::{parse_dsl, reloads_cleanly, DslError};
use odecirc_core::stdlib;

fn odecirc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_odecirc"))
        .args(args)
        .env_remove("ODECIRC_MAX_ORACLE_X")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn eval_smash() {
    let o = odecirc(&["eval", "--mode", "acdl", "(std smash)", "3", "5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "64\n");
}

#[test]
fn eval_accepts_negative_arguments() {
    let o = odecirc(&["eval", "(- 0 x1)", "-7"]);
    assert_eq!(stdout(&o), "7\n");
    let o = odecirc(&["eval", "(div2 x1)", "-7"]);
    assert_eq!(stdout(&o), "-4\n");
}

#[test]
fn verify_bit_passes_both_campaigns() {
    let o = odecirc(&["verify", "--mode", "acdl", "(std BIT)", "--samples", "1000", "--seed", "7"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2, "{out}");
    assert!(lines[0].starts_with("PASS eval-vs-step"), "{out}");
    assert!(lines[1].starts_with("PASS eval-vs-circuit"), "{out}");
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "(std exists_eq)", "--samples", "100", "--seed", "3", "--widths", "4,6"];
    let a = odecirc(&args);
    let b = odecirc(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn oracle_bound_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_odecirc"))
        .args(["verify", "(std msp)", "--samples", "20", "--widths", "4"])
        .env("ODECIRC_MAX_ORACLE_X", "9")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("x <= 9"), "{}", stdout(&o));
}

#[test]
fn check_rejects_times_under_acdl() {
    let o = odecirc(&["check", "--mode", "acdl", "(* x1 x2)"]);
    assert!(!o.status.success());
    let err = stderr(&o);
    assert!(err.contains("ForbiddenNode"), "{err}");
    assert!(err.contains("TCDL"), "{err}");
    let o = odecirc(&["check", "--mode", "tcdl", "(* x1 x2)"]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn parse_errors_exit_nonzero() {
    let o = odecirc(&["check", "(+ 0"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("parse error at 1:1"));
    let o = odecirc(&["eval", "(std nope)"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("unknown stdlib name"));
}

#[test]
fn dsl_examples() {
    assert_eq!(parse_dsl("(ode3 (proj 1 1))").unwrap(), stdlib::msp());
    assert_eq!(parse_dsl("(std smash)").unwrap(), stdlib::smash());
    assert!(matches!(parse_dsl("(+ 0"), Err(DslError::Parse { .. })));
}

#[test]
fn compile_then_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("add.circ");
    let p = path.to_str().unwrap();
    let o = odecirc(&["compile", "(+ x1 x2)", "--widths", "3", "--out", p]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(reloads_cleanly(&std::fs::read_to_string(&path).unwrap()));
    // 3 + 1 = 4, bits LSB first.
    let o = odecirc(&["simulate", p, "110100"]);
    assert_eq!(stdout(&o), "0010\n");

    let o = odecirc(&["compile", "--mode", "tcdl-star", "(std bcount)", "--widths", "4"]);
    assert!(o.status.success());
    assert!(reloads_cleanly(&stdout(&o)));
}

#[test]
fn roundtrip_of_a_compiled_circuit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sg.circ");
    let p = path.to_str().unwrap();
    assert!(odecirc(&["compile", "(sg (- x1 x2))", "--widths", "2", "--signed", "--out", p]).status.success());
    let o = odecirc(&["roundtrip", p]);
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).starts_with("PASS roundtrip: checked 64 inputs"), "{}", stdout(&o));
}

#[test]
fn stats_and_listing() {
    let o = odecirc(&["stats", "(std smash)", "--widths", "4,8"]);
    let out = stdout(&o);
    let depths: Vec<&str> = out.lines().skip(2).map(|l| l.split_whitespace().nth(1).unwrap()).collect();
    assert_eq!(depths.len(), 2);
    assert_eq!(depths[0], depths[1]);

    let o = odecirc(&["stdlib-list"]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), stdlib::registry().len());
    assert!(out.lines().any(|l| l.starts_with("BIT ")));
}

#[test]
fn missing_files_fail() {
    let o = odecirc(&["simulate", "/nonexistent/c.circ", "01"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("reading"));
}
