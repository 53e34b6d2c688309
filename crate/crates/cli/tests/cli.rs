use std::path::Path;
use std::process::{Command, Output};

const TWO_BRANCH: &str = r#"{"a": ["0", "1/2"], "b": ["1/4", "-1/4"], "lambda": "1/2"}"#;

fn pwc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwc")).args(args).output().expect("pwc runs")
}

fn pwc_with_threads(threads: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwc"))
        .env("PWC_THREADS", threads)
        .args(args)
        .output()
        .expect("pwc runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn two_branch_spec(dir: &Path) -> String {
    let path = dir.join("two_branch.json");
    std::fs::write(&path, TWO_BRANCH).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn rho_of_the_half_rotation() {
    assert_eq!(stdout(&pwc(&["rho", "--lambda", "1/2", "--b", "3/4"])), "1/2 EXACT\n");
}

#[test]
fn classify_writes_one_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let spec = two_branch_spec(dir.path());
    let target = dir.path().join("out.json");
    let out = pwc(&["classify", "--spec", &spec, "--out", target.to_str().unwrap()]);
    assert!(stdout(&out).is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["verdict"], "SINGULAR_CONNECTION");
    assert_eq!(v["connection"]["order"], 1);
    assert_eq!(v["bounds"]["k"], 2);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn rotation_cycle_in_classification() {
    let text = stdout(&pwc(&["classify", "--lambda", "1/2", "--b", "3/4"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["verdict"], "ASYMPTOTICALLY_PERIODIC");
    assert_eq!(v["cycles"][0]["orbit"], serde_json::json!(["1/6", "5/6"]));
}

#[test]
fn tongue_table_rows() {
    let text = stdout(&pwc(&["tongues", "--lambda", "1/2", "--qmax", "3"]));
    assert_eq!(text, "lambda,p,q,b_lo,b_hi\n1/2,1,3,4/7,9/14\n1/2,1,2,2/3,5/6\n1/2,2,3,6/7,13/14\n");
}

#[test]
fn connection_root_report() {
    let dir = tempfile::tempdir().unwrap();
    let spec = two_branch_spec(dir.path());
    let text = stdout(&pwc(&["connections", "--spec", &spec, "--format", "csv"]));
    assert_eq!(text, "lo,hi,exact\n1/2,1/2,1/2\n");
    let none = stdout(&pwc(&["connections", "--a", "0,1/2", "--b", "1/4,-1/4", "--lambda", "33/64"]));
    assert_eq!(none, "null\n");
}

#[test]
fn entropy_rows() {
    let dir = tempfile::tempdir().unwrap();
    let spec = two_branch_spec(dir.path());
    let text = stdout(&pwc(&["entropy", "--spec", &spec, "--nmax", "2"]));
    assert_eq!(text, "n,alpha_n,entropy_n\n1,2,0.693147180559945\n2,2,0.346573590279973\n");
}

#[test]
fn validation_errors_exit_with_two() {
    for args in [
        &["map", "--lambda", "2", "--b", "3/4"][..],
        &["classify", "--lambda", "1/2", "--b", "3/4", "--mode", "float"],
        &["rho", "--lambda", "1/2", "--b", "1/4"],
        &["map", "--lambda", "1/2"],
        &["tongues", "--qmax", "3"],
        &["orbit", "--lambda", "1/2", "--b", "3/4", "--x", "1"],
        &["frobnicate"],
    ] {
        let out = pwc(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn strict_undecided_exits_with_three() {
    let args = ["classify", "--lambda", "1/2", "--b", "3/4", "--budget", "3", "--strict"];
    let out = pwc(&args);
    assert_eq!(out.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "UNDECIDED");
    assert_eq!(pwc(&args[..args.len() - 1]).status.code(), Some(0));
}

#[test]
fn float_mode_orbit() {
    let text = stdout(&pwc(&["orbit", "--lambda", "1/2", "--b", "3/4", "--steps", "1", "--mode", "float"]));
    let row: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
    let lo: f64 = row[1].split(['+', '-']).next().unwrap().parse().unwrap();
    assert_eq!(lo, 0.75);
}

#[test]
fn sweep_is_thread_independent() {
    let args = ["sweep", "--a", "0", "--b", "3/4", "--grid", "20", "--budget", "2000"];
    let one = stdout(&pwc_with_threads("1", &args));
    let four = stdout(&pwc_with_threads("4", &args));
    assert_eq!(one, four);
    assert_eq!(one.lines().count(), 20);
    assert!(one.starts_with("lambda,verdict,n_cycles,max_period,undecided_reason\n1/20,"));
}
