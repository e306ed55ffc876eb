use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    run_env(args, None)
}

fn run_env(args: &[&str], catalog: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lambda-ext"));
    cmd.args(args).env_remove("LAMBDA_EXT_CATALOG");
    if let Some(path) = catalog {
        cmd.env("LAMBDA_EXT_CATALOG", path);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lambda-ext-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn series_ends_with_printed_t6() {
    let o = run(&["series", "C05_lambda", "--order", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 7);
    assert_eq!(out.lines().last().unwrap(), "t^6 : -1463/65536 - 25/1048576*lambda_sq");
}

#[test]
fn solve_reports_degeneracy() {
    let o = run(&["solve", "EQNMODD", "--M", "0", "--N", "5", "--order", "8", "--seed", "C05"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("degeneracy at n=6"), "{out}");
    assert!(out.contains("t^6 : p\n"), "{out}");
}

#[test]
fn gb_prints_integer_prefix() {
    let o = run(&["gb", "C11_M", "--param", "1", "--order", "10", "--rescale", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("integer prefix verified: 11 terms"), "{out}");
    assert!(out.contains("t^2 : -15\n"), "{out}");
}

#[test]
fn gb_search_finds_a_factor() {
    let o = run(&["gb", "C11", "--param", "1/2", "--order", "20", "--output", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["report"]["all_integer"], true);
    assert_eq!(v["report"]["verified_prefix"], 21);
}

#[test]
fn unknown_ids_exit_2() {
    assert_eq!(run(&["check", "no_such_check"]).status.code(), Some(2));
    assert_eq!(run(&["series", "no_such_series"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "NOSUCHODE", "--N", "5"]).status.code(), Some(2));
}

#[test]
fn computation_errors_exit_3() {
    // Printed only through t^10 and not reproduced by any solver family.
    let o = run(&["series", "C11_glob", "--order", "30"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());
    // M + N even is not a valid two-index equation.
    assert_eq!(run(&["solve", "EQNMODD", "--M", "1", "--N", "5"]).status.code(), Some(3));
}

#[test]
fn check_json_carries_schema_version() {
    let o = run(&["check", "verif_f1f3", "--order", "12", "--output", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["reports"][0]["status"], "pass");
    assert_eq!(v["reports"][0]["checked_order"], 12);
}

#[test]
fn suite_manifest_is_sorted_and_deterministic() {
    let m = temp_file("manifest.txt", "# small\nxy_odd 8\nC05_half 10\ncontrol_toda_constant\n");
    let path = m.to_str().unwrap();
    let a = run(&["suite", path, "--output", "csv"]);
    let b = run(&["suite", path, "--output", "csv", "--threads", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let ids: Vec<String> = stdout(&a).lines().skip(1).map(|l| l.split(',').next().unwrap().to_string()).collect();
    assert_eq!(ids, ["C05_half", "control_toda_constant", "xy_odd"]);
}

#[test]
fn suite_rejects_unknown_manifest_ids() {
    let m = temp_file("bad.txt", "xy_odd\nnot_a_check 3\n");
    assert_eq!(run(&["suite", m.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn catalog_override_is_honoured() {
    let c = temp_file("catalog.txt", "@ geometric | alg_expr | - | test entry\n  expr : (1-t)^(-1)\n");
    let o = run_env(&["series", "geometric", "--order", "3"], c.to_str());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "t^0 : 1\nt^1 : 1\nt^2 : 1\nt^3 : 1\n");
    // The embedded catalog is not consulted.
    assert_eq!(run_env(&["series", "C05_lambda", "--order", "2"], c.to_str()).status.code(), Some(2));
    // A missing override file is a computation error.
    assert_eq!(run_env(&["series", "geometric"], Some("/nonexistent/catalog.txt")).status.code(), Some(3));
}

#[test]
fn csv_and_decimal_output() {
    let o = run(&["series", "C05_lambda", "--order", "2", "--output", "csv"]);
    assert_eq!(stdout(&o), "n,coefficient\n0,1\n1,-1/4\n2,-3/32\n");
    let o = run(&["series", "C05_lambda", "--order", "1", "--decimal", "4"]);
    assert_eq!(stdout(&o), "t^0 : 1    [approx 1.0000]\nt^1 : -1/4    [approx -0.2500]\n");
}

#[test]
fn series_specializes_parameter() {
    let o = run(&["series", "C05_lambda", "--order", "6", "--param", "lambda_sq=0"]);
    assert_eq!(stdout(&o).lines().last().unwrap(), "t^6 : -1463/65536");
    let o = run(&["series", "C05_lambda", "--order", "6", "--param", "alpha=0"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn rejects_order_zero() {
    let o = run(&["series", "C05_lambda", "--order", "0"]);
    assert_eq!(o.status.code(), Some(2));
}
