use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gauss-eof"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn eof_json_report() {
    let out = run(&["eof", "--params", "2", "1.5", "1", "-1", "--format", "json"]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    assert!((v["eof"].as_f64().unwrap() - 0.2022298409).abs() < 1e-7);
    assert_eq!(v["method"], "squeezed_thermal");
    assert_eq!(v["separable"], false);
    for key in ["params", "a0", "b0", "delta0", "delta0_prime"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn gamma_file_matches_inline_params() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(
        file,
        r#"{{"gamma": [[2,0,1.2,0],[0,2,0,-1],[1.2,0,1.5,0],[0,-1,0,1.5]]}}"#
    )
    .unwrap();
    let from_file = run(&["eof", "--input", file.path().to_str().unwrap()]);
    let inline = run(&["eof", "--params", "2", "1.5", "1.2", "-1"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, inline.stdout);
}

#[test]
fn table_has_six_rows_and_strict_matches_cells() {
    let csv = run(&["table1", "--format", "csv"]);
    assert!(csv.status.success());
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 7);

    let json = run(&["table1"]);
    let v = json_stdout(&json);
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    let all_ok = v["all_within_tolerance"].as_bool().unwrap();
    let strict = run(&["table1", "--strict"]);
    assert_eq!(strict.status.success(), all_ok);
    if !all_ok {
        assert_eq!(strict.status.code(), Some(3));
    }
}

#[test]
fn figure1_minimum_is_the_floor() {
    let out = run(&["figure1", "--a", "-1.2", "--r-max", "1.0", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let min = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap())
        .fold(f64::INFINITY, f64::min);
    let a2: f64 = 1.44;
    let b = (a2 - 1.0 / a2).abs() / (a2 + 1.0 / a2);
    assert!((min - b).abs() < 1e-6, "{min} vs {b}");
}

#[test]
fn sweep_family_csv() {
    let out = run(&["sweep-family", "--kappa", "2", "--nbar", "0", "1", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "kappa,nbar,eof,g_kappa");
    assert!(lines[1].starts_with("2,0,2,2"));
}

#[test]
fn bounds_report_fields() {
    let v = json_stdout(&run(&["bounds", "--params", "2", "1.5", "1", "-1"]));
    assert_eq!(v["upper_physical"], true);
    let lower = v["lower_bound"].as_f64().unwrap();
    let exact = v["eof"].as_f64().unwrap();
    let gauss = v["gaussian_eof"].as_f64().unwrap();
    assert!(lower <= exact && exact <= gauss);
}

#[test]
fn unphysical_input_exits_with_input_error() {
    let out = run(&["eof", "--params", "1", "1", "0.9", "-0.9"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "NotBonaFide");
    assert_eq!(err["exit_code"], 1);
}

#[test]
fn usage_errors_exit_with_input_error() {
    let out = run(&["eof", "--params", "2", "1.5", "1", "-1", "--input", "x.json"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["eof"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validate_reports_spectrum() {
    let v = json_stdout(&run(&["validate", "--params", "2", "1.5", "1", "-1"]));
    assert_eq!(v["is_bona_fide"], true);
    assert_eq!(v["symplectic_eigenvalues"].as_array().unwrap().len(), 2);
}

#[test]
fn decomposition_is_deterministic_across_thread_counts() {
    let args = [
        "verify-decomposition", "--params", "2", "2", "1.5", "-0.8", "--samples", "20000", "--seed", "5",
    ];
    let one = bin().args(args).env("GAUSS_EOF_THREADS", "1").output().unwrap();
    let four = bin().args(args).env("GAUSS_EOF_THREADS", "4").output().unwrap();
    assert!(one.status.success(), "{}", String::from_utf8_lossy(&one.stderr));
    assert_eq!(one.stdout, four.stdout);
    let v = json_stdout(&one);
    assert_eq!(v["pass"], true);
    assert_eq!(v["n_samples"], 20000);
}

#[test]
fn bad_thread_setting_is_an_input_error() {
    let out = bin().args(["table1"]).env("GAUSS_EOF_THREADS", "many").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
