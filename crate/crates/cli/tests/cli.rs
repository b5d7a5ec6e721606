use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-hilbert")).args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_padic-hilbert"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn scalar_abs() {
    let o = run(&["scalar", "abs", "--p", "5", r#"{"a":"75","b":"0"}"#]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), r#"{"norm":"p^-2"}"#);
}

#[test]
fn selftest_contract() {
    let o = run(&["selftest", "--suite", "parseval", "--cases", "1000", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), r#"{"suite":"parseval","pass":1000,"fail":0}"#);
}

#[test]
fn selftest_is_byte_identical() {
    let a = run(&["selftest", "--suite", "all", "--cases", "5", "--seed", "3"]);
    let b = run(&["selftest", "--suite", "all", "--cases", "5", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn malformed_input_points_at_the_field() {
    let o = run(&["vec", "norm", r#"{"dim":2,"coeffs":["1",{"a":"x"}]}"#]);
    assert_eq!(o.status.code(), Some(1));
    let diag: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(diag["pointer"], "/coeffs/1/a");
    let o = run(&["vec", "norm", "{not json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn precision_loss_exit_code() {
    // a value known only to be O(p^3) has no determined absolute value
    let o = run(&["scalar", "abs", r#""O(p^3)""#]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn domain_error_exit_code() {
    let o = run(&["scalar", "abs", "--p", "9", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["scalar", "abs", "--mu", "bogus", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn stdin_and_env_overrides() {
    let o = run_stdin(&["scalar", "abs"], r#"{"a":"49"}"#);
    assert_eq!(stdout_json(&o)["norm"], "p^0");
    let o = Command::new(env!("CARGO_BIN_EXE_padic-hilbert"))
        .args(["scalar", "abs", r#"{"a":"49"}"#])
        .env("PADIC_P", "7")
        .output()
        .unwrap();
    assert_eq!(stdout_json(&o)["norm"], "p^-2");
    // flags win over the environment
    let o = Command::new(env!("CARGO_BIN_EXE_padic-hilbert"))
        .args(["scalar", "abs", "--p", "5", r#"{"a":"49"}"#])
        .env("PADIC_P", "7")
        .output()
        .unwrap();
    assert_eq!(stdout_json(&o)["norm"], "p^0");
}

#[test]
fn input_from_file() {
    let dir = std::env::temp_dir().join(format!("padic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("op.json");
    std::fs::write(&path, r#"{"rows":2,"cols":2,"entries":[["1","5"],["0","1/25"]]}"#).unwrap();
    let o = run(&["op", "classify", path.to_str().unwrap()]);
    let v = stdout_json(&o);
    assert_eq!(v["trace_class"], true);
    assert_eq!(v["op_norm"], "p^2");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn operator_commands() {
    let o = run(&["op", "classify", r#"{"rows":"inf","cols":"inf","tail":{"alpha":"0","beta":"1"}}"#]);
    let v = stdout_json(&o);
    assert_eq!(v["bounded"], false);
    assert_eq!(v["op_norm"], Value::Null);
    let o = run(&["op", "trace", r#"{"rows":2,"cols":2,"entries":[["1","5"],["0","4"]]}"#]);
    assert_eq!(stdout_json(&o)["trace"]["a"], "5");
    let o = run(&["op", "adjoint", r#"{"rows":1,"cols":2,"entries":[[{"a":"1","b":"1"},"3"]]}"#]);
    let v = stdout_json(&o);
    assert_eq!(v["rows"], 2);
    assert_eq!(v["entries"][0][0]["b"], "-1");
}

#[test]
fn tensor_and_iso_commands() {
    let o = run(&["tensor", "rank", r#"{"pairs":[[["1","0"],["0","1"]],[["0","1"],["1","0"]]]}"#]);
    assert_eq!(stdout_json(&o)["rank"], 2);
    let o = run(&["tensor", "zero", r#"{"pairs":[[["1","0"],["0","1"]],[["-1","0"],["0","1"]]]}"#]);
    let v = stdout_json(&o);
    assert_eq!(v["zero"], true);
    assert_eq!(v["zero_by_functionals"], true);
    let o = run(&["iso", "roundtrip", r#"{"rows":2,"cols":3,"entries":[["1","2","3"],["5","1/5","0"]]}"#]);
    let v = stdout_json(&o);
    assert_eq!(v["identity"], true);
    assert_eq!(v["norm_preserved"], true);
    let o = run(&["iso", "rankone", r#"{"v":[{"a":"1","b":"2"},"1"],"w":["3","5"]}"#]);
    assert_eq!(stdout_json(&o)["law"], true);
}

#[test]
fn conj_commands() {
    let o = run(&["conj", "zcheck", r#"{"linear":{"rows":2,"cols":2,"entries":[["0","1"],["1","0"]]}}"#]);
    assert_eq!(stdout_json(&o)["verdict"], "anti_unitary");
    let o = run(&["conj", "zcheck", r#"{"rows":2,"cols":2,"entries":[["5","0"],["0","1"]]}"#]);
    assert_eq!(stdout_json(&o)["verdict"], "not_anti_unitary");
    let o = run(&["conj", "build", r#"{"basis":[["0","1"],["1","0"]]}"#]);
    assert_eq!(stdout_json(&o)["involutive"], true);
    let o = run(&["conj", "decompose", r#"{"x":[{"a":"0","b":"1"},"0"]}"#]);
    let v = stdout_json(&o);
    assert_eq!(v["chi2"]["coeffs"][0]["a"], "-2");
    assert_eq!(v["reconstructed"], true);
}

#[test]
fn dichotomy_report() {
    let o = run(&["conj", "dichotomy", "--p", "5", "--mu", "nonresidue", "--z1", "sqrt(1/2)"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    // conj(√2/2)·√2/2 = −1/2, so the even vector has ⟨ψ, ψ⟩ = −1
    assert_eq!(v["self_ip"][1]["a"], "-1");
    assert_eq!(v["branch"], "neither");
    assert_eq!(v["t1_below_one_achievable"], false);
    let o = run(&["conj", "dichotomy", "--z1", "1", "--z2", "1"]);
    assert_eq!(stdout_json(&o)["branch"], "invariant_normal_not_orthonormal");
}

#[test]
fn subspace_commands() {
    let w = r#"{"ambient":2,"basis":[["1","0"]]}"#;
    let v = stdout_json(&run(&["sub", "perp", w]));
    assert_eq!(v["hilbert"], "hilbert");
    assert_eq!(v["basis"][0]["coeffs"][1]["a"], "1");
    let v = stdout_json(&run(&["sub", "regular", w]));
    assert_eq!(v["verdict"], "regular");
    let v = stdout_json(&run(&["sub", "tensor", &format!(r#"{{"h_dim":2,"subspace":{w}}}"#)]));
    assert_eq!(v["regular"], true);
    assert_eq!(v["subspace"]["basis"].as_array().unwrap().len(), 2);
    let v = stdout_json(&run(&["sub", "c0iso", r#"{"lambda":[["5","0"],["0","1/5"]]}"#]));
    assert_eq!(v["sup_norm"], v["proj_norm"]);
    let o = run(&["sub", "perp", r#"{"ambient":2,"basis":[["1","1"]]}"#]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn pretty_format() {
    let o = run(&["scalar", "abs", "--format", "pretty", "5"]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("\n"));
}
