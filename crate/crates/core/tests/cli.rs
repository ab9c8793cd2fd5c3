use std::process::{Command, Output};

use eop_lab::report::Envelope;
use eop_lab::superintegrable::{build_case1, spectrum_report, SpectrumReport};
use eop_lab::Execution;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eop-lab"))
        .args(args)
        .env("EOP_LAB_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn ladder_json_table() {
    let v: Value = serde_json::from_str(&stdout(&["ladder", "--m", "2", "--format", "json"])).unwrap();
    assert_eq!(v["status"], "pass");
    let sq = &v["result"]["squared_by_nu"];
    assert_eq!(sq["-3"], "48");
    assert_eq!(sq["0"], "96");
    assert_eq!(sq["1"], "336");
    assert_eq!(v["result"]["kernel"], serde_json::json!([-3, 1, 2]));
}

#[test]
fn spectrum_text_sequence() {
    let text = stdout(&["spectrum", "--case", "1", "--m", "2", "--n-max", "10"]);
    assert!(text.contains("levels: -4, -2, 0, 2^2, 4^3, 6^4, 8^5, 10^6"), "{text}");
    assert!(text.contains("status: PASS"));
}

#[test]
fn spectrum_json_round_trip() {
    let out = stdout(&["spectrum", "--m", "2", "--n-max", "20", "--format", "json"]);
    let env: Envelope<SpectrumReport> = serde_json::from_str(&out).unwrap();
    let direct = spectrum_report(&build_case1(2).unwrap(), 20, None, Execution::Sequential).unwrap();
    assert_eq!(env.result, direct);
    assert_eq!(env.command, "spectrum");
}

#[test]
fn output_is_deterministic_across_execution_modes() {
    for fmt in ["text", "json", "csv"] {
        let a = stdout(&[
            "tables", "--case", "2", "--m1", "2", "--m2", "2", "--n-max", "30", "--format", fmt,
        ]);
        let b = stdout(&[
            "tables",
            "--case",
            "2",
            "--m1",
            "2",
            "--m2",
            "2",
            "--n-max",
            "30",
            "--format",
            fmt,
            "--sequential",
        ]);
        assert_eq!(a, b, "{fmt}");
    }
}

#[test]
fn table_csv_columns() {
    let csv = stdout(&["tables", "--m", "2", "--n-max", "6", "--format", "csv"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("lambda,mu,p,N_unirreps,degeneracy"));
    assert!(csv.contains("\n0,0,0,1,1\n"), "{csv}");
    // lambda = 1, mu = 0: p = "1,0^2"
    assert!(csv.contains("\n1,0,\"1,0^2\",3,4\n"), "{csv}");
    let csv = stdout(&["tables", "--case", "2", "--m1", "2", "--n-max", "0", "--format", "csv"]);
    assert!(csv.starts_with("lambda,rho,sigma,mu,p,N_unirreps,degeneracy\n"));
}

#[test]
fn diagram_svg() {
    let svg = stdout(&["diagram", "--m", "2", "--format", "svg"]);
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains(r#"version="1.1""#));
    assert!(svg.contains(r#"data-nu="-3" data-energy="0""#));
    assert_eq!(svg.matches(r#"class="chain""#).count(), 3);
}

#[test]
fn cross_check_and_out_file() {
    let dir = std::env::temp_dir().join(format!("eop-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("unirreps.json");
    let out = run(&[
        "unirreps",
        "--case",
        "2",
        "--m1",
        "2",
        "--n-max",
        "10",
        "--cross-check",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["solver_comparison"]["only_generic"], serde_json::json!([]));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["spectrum", "--format", "svg"][..],
        &["pha-check", "--m", "3"],
        &["spectrum", "--case", "2", "--m1", "2", "--m2", "4"],
        &["no-such-command"],
        &["ladder", "--m", "x"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn pha_check_passes() {
    let v: Value = serde_json::from_str(&stdout(&["pha-check", "--m", "4", "--format", "json"])).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["result"]["q_degree"], 5);
}
