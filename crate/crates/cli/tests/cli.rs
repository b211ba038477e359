use std::io::Write;
use std::process::{Command, Output, Stdio};

fn symcl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symcl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn check_prints_combinator_scheme() {
    let o = symcl(&["check", "--ccl", "K[a,b]"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "~a | (b | a)");
}

#[test]
fn check_variable_in_context() {
    let o = symcl(&["check", "--ls", "x", "--ctx", "x:a"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "a");
}

#[test]
fn check_star_term_applied_is_a_type_error() {
    let o = symcl(&["check", "--ccl", "(x * y) z", "--ctx", "x:~a", "--ctx", "y:a"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("type error"));
}

#[test]
fn parse_errors_exit_with_two_and_point_at_the_input() {
    let o = symcl(&["check", "--ccl", "(x * y"]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(err.contains("^"), "{err}");
    assert_eq!(code(&symcl(&["check", "--ls", "\\x. x * x"])), 2);
    assert_eq!(code(&symcl(&["frobnicate"])), 2);
}

#[test]
fn check_json_report() {
    let o = symcl(&["check", "--ccl", "K[a,b]", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ok"], true);
    assert_eq!(v["type"], "~a | (b | a)");
}

#[test]
fn reduce_identity_application_with_trace() {
    let o = symcl(&["reduce", "--ccl", "I x", "--trace"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("2 steps"), "{out}");
    assert_eq!(out.lines().last(), Some("x"));
}

#[test]
fn reduce_projection() {
    let o = symcl(&[
        "reduce",
        "--ls",
        "<u,v> * s1(w : ~a | ~b)",
        "--ctx",
        "u:a, v:b, w:~a",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "u * w");
}

#[test]
fn reduce_normal_form_takes_no_steps() {
    let o = symcl(&["reduce", "--ls", "x", "--ctx", "x:a", "--format", "json", "--trace"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["steps"], 0);
    assert_eq!(v["result"], "x");
    assert_eq!(v["trace"], serde_json::json!([]));
}

#[test]
fn reduce_json_trace_names_rules_and_paths() {
    let o = symcl(&["reduce", "--ccl", "K (I x) y", "--format", "json", "--trace"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["trace"][0]["rule"], "k");
    assert_eq!(v["trace"][0]["path"], "root");
    assert_eq!(v["result"], "x");
}

#[test]
fn reduce_all_lists_every_normal_form() {
    let o = symcl(&[
        "reduce",
        "--strategy",
        "all",
        "--ccl",
        "C (K y) (K z) * C (K y') (K z')",
        "--ctx",
        "y:~b, z:b, y':~c, z':c",
    ]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let mut got: Vec<&str> = out.lines().collect();
    got.sort();
    assert_eq!(got, ["y * z", "y' * z'"]);
}

#[test]
fn fuel_exhaustion_is_a_failure() {
    let o = symcl(&["reduce", "--ccl", "S K K (S K K x)", "--fuel", "1"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn graph_is_dot_with_boxed_normal_forms() {
    let o = symcl(&["graph", "--ccl", "K (I x) y"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("digraph"));
    assert!(out.contains("[label=\"x\", shape=box]"), "{out}");
}

#[test]
fn translate_to_ccl() {
    let o = symcl(&["translate", "--to", "ccl", "\\x:a.(y * x)", "--ctx", "y:~a"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "C (K y) (S K K)");
}

#[test]
fn translate_to_ls_and_back_typechecks() {
    let o = symcl(&["translate", "--to", "ls", "K[a,b] u v", "--ctx", "u:a, v:b"]);
    // `K[a,b] u v` needs v : b, and the context agrees.
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    let o = symcl(&["translate", "--to", "ls", "K[a,b] u", "--ctx", "u:a"]);
    assert_eq!(code(&o), 0);
    let t = stdout(&o);
    let c = symcl(&["check", "--ls", t.trim(), "--ctx", "u:a"]);
    assert_eq!(stdout(&c).trim(), "b | a");
}

#[test]
fn gen_is_deterministic() {
    let a = symcl(&["gen", "--ccl", "--max-size", "5", "--atoms", "1"]);
    let b = symcl(&["gen", "--ccl", "--max-size", "5", "--atoms", "1"]);
    assert_eq!(code(&a), 0);
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    let r1 = symcl(&["gen", "--ls", "--max-size", "7", "--seed", "9", "--count", "4"]);
    let r2 = symcl(&["gen", "--ls", "--max-size", "7", "--seed", "9", "--count", "4"]);
    assert_eq!(stdout(&r1).lines().count(), 4);
    assert_eq!(r1.stdout, r2.stdout);
}

#[test]
fn step_follows_chosen_redexes() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_symcl"))
        .args(["step", "--ccl", "K (I x) y"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"9\n0\n0\n0\n").unwrap();
    let o = child.wait_with_output().unwrap();
    let out = stdout(&o);
    assert!(out.contains("no such redex: `9`"), "{out}");
    assert!(out.contains("[0] k at root: K (S K K x) y"), "{out}");
    assert!(out.trim_end().ends_with("normal form"), "{out}");
}

#[test]
fn check_file_of_claims() {
    let dir = env!("CARGO_TARGET_TMPDIR");
    let path = format!("{dir}/claims.txt");
    std::fs::write(
        &path,
        "# claims\n\
         @ccl\n\
         |- K[a, b] : ~a | (b | a)\n\
         @ctx x:a\n\
         I x =>* x [max 2]\n\
         I x =>+ x [max 1]\n\
         @ls\n\
         x:a, y:~a |- y * x : #\n",
    )
    .unwrap();
    let o = symcl(&["check", "--file", &path]);
    let out = stdout(&o);
    assert_eq!(code(&o), 1, "{out}");
    assert!(out.contains("4 claims, 1 failed"), "{out}");
    assert!(out.contains("FAIL line 6"), "{out}");
}

#[test]
fn verify_single_suite() {
    let o = symcl(&["verify", "--suite", "non-confluence"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("PASS non-confluence"));
    let o = symcl(&["verify", "--suite", "psi-simulation", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["name"], "psi-simulation");
    assert_eq!(v[0]["instances"], 23);
    assert_eq!(v[0]["failures"], serde_json::json!([]));
}

#[test]
fn verify_rejects_unknown_suite() {
    assert_eq!(code(&symcl(&["verify", "--suite", "nope"])), 2);
    let o = symcl(&["verify", "--list"]);
    assert!(stdout(&o).lines().any(|l| l == "omega-simulation"));
}
