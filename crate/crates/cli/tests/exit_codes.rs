use std::io::Write;
use std::process::{Command, Output};

const GOOD: &str = "
fluents inertial lit : bool.
actions a.
mechanism ma : lit(I) <- a(I - 1).
scenario
init(neg lit).
do(a, 0).
";

fn run(text: &str, args: &[&str]) -> Output {
    let mut f = tempfile::Builder::new().suffix(".w").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    let path = f.path().to_str().unwrap().to_string();
    Command::new(env!("CARGO_BIN_EXE_wcausal"))
        .arg(args[0])
        .arg(&path)
        .args(&args[1..])
        .args(if args[0] == "check" { &[][..] } else { &["--horizon", "3"][..] })
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn valid_theory_checks() {
    let o = run(GOOD, &["check"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn causes_in_text() {
    let o = run(GOOD, &["causes", "lit"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("{do(a,0)}"));
}

#[test]
fn static_head_is_rejected() {
    let text = "statics s : bool.\nactions a.\nmechanism m : s <- a(I).\nscenario\n";
    let o = run(text, &["check"]);
    assert_eq!(code(&o), 1);
    assert!(!o.stderr.is_empty());
}

#[test]
fn syntax_error_is_rejected() {
    assert_eq!(code(&run("fluents inertial : bool.", &["check"])), 1);
}

#[test]
fn missing_file() {
    let o = Command::new(env!("CARGO_BIN_EXE_wcausal")).args(["check", "/nonexistent/x.w"]).output().unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn inconsistent_scenario() {
    let text = format!("{GOOD}obs(lit, false, 2).\n");
    assert_eq!(code(&run(&text, &["models"])), 3);
}

#[test]
fn unknown_gamma_constant() {
    assert_eq!(code(&run(GOOD, &["models", "--gamma", "zz=1"])), 1);
}

#[test]
fn no_matching_change() {
    assert_eq!(code(&run(GOOD, &["causes", "neg lit"])), 3);
}
