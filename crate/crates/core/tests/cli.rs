use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bs3-lambda")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_point(name: &str, a_class: i64, flipped: &[u64]) -> PathBuf {
    let primes = [5u64, 7, 11, 13];
    let signs: serde_json::Map<String, Value> = primes
        .iter()
        .map(|p| (p.to_string(), Value::from(if flipped.contains(p) { -1 } else { 1 })))
        .collect();
    let dir = std::env::temp_dir().join(format!("bs3-lambda-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, serde_json::json!({ "a_class": a_class, "signs": signs }).to_string()).unwrap();
    path
}

#[test]
fn adams_prints_newton_formula() {
    let o = bin(&["adams", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "psi^4 = Lr1^4 - 4*Lr1^2*Lr2 + 4*Lr1*Lr3 + 2*Lr2^2 - 4*Lr4");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(bin(&["adams", "0"]).status.code(), Some(2));
    assert_eq!(bin(&["universal", "product", "9"]).status.code(), Some(2));
    assert_eq!(bin(&["--nm-max", "4", "universal", "compose", "2", "3"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(bin(&["compare", "/does/not/exist", "/nor/this"]).status.code(), Some(2));
}

#[test]
fn raised_cap_allows_larger_products() {
    let o = bin(&["--n-max", "6", "--format", "json", "universal", "product", "1"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "product");
    assert_eq!(v["terms"][0]["coef"], "1");
}

#[test]
fn json_is_byte_identical_across_runs() {
    let args = ["--format", "json", "--seed", "7", "--samples", "10", "verify", "genus"];
    let first = bin(&args);
    let second = bin(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["passed"], true);
}

#[test]
fn verify_theorem_passes() {
    let o = bin(&["verify", "theorem"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS control_top_eigenvalue_15"));
}

#[test]
fn compare_names_the_flipped_prime() {
    let x = write_point("bs3.json", 1, &[]);
    let y = write_point("flip11.json", 1, &[11]);
    let o = bin(&["compare", x.to_str().unwrap(), y.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("inequivalent"));
    assert!(text.contains("distinguished by (X/11)"));

    let o = bin(&["--format", "json", "compare", x.to_str().unwrap(), x.to_str().unwrap()]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["comparison"]["equivalent"], true);
    assert_eq!(v["comparison"]["ko_witness"]["eps"], 1);
}

#[test]
fn compare_identifies_a_with_minus_a() {
    let x = write_point("a5.json", 5, &[7]);
    let y = write_point("a19.json", 19, &[7]);
    let o = bin(&["compare", x.to_str().unwrap(), y.to_str().unwrap()]);
    assert!(stdout(&o).lines().any(|l| l == "equivalent"));
}
