//! End-to-end tests of the binary: exit codes, report files, and
//! byte-identical JSON determinism.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_carlitz"))
}

#[test]
fn verify_passes_and_exits_zero() {
    let out = bin()
        .args(["verify", "--q", "3", "--p", "theta", "--n", "1"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("ALL PASS"));
}

#[test]
fn reducible_prime_is_usage_error() {
    let out = bin()
        .args(["verify", "--q", "2", "--p", "theta^2+theta", "--n", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("reducible"));
}

#[test]
fn json_reports_are_byte_identical() {
    let dir = std::env::temp_dir();
    let p1 = dir.join("carlitz_report_run1.json");
    let p2 = dir.join("carlitz_report_run2.json");
    for p in [&p1, &p2] {
        let out = bin()
            .args([
                "verify",
                "--q",
                "2",
                "--p",
                "theta^2+theta+1",
                "--n",
                "0",
                "--json",
            ])
            .arg(p)
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let a = std::fs::read(&p1).unwrap();
    let b = std::fs::read(&p2).unwrap();
    assert_eq!(a, b, "reports must be byte-identical for identical configs");
    let parsed: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(parsed["config"]["q"], 2);
    assert!(parsed["checks"].as_array().unwrap().len() > 5);
    let _ = std::fs::remove_file(&p1);
    let _ = std::fs::remove_file(&p2);
}

#[test]
fn seed_echo_prints_config_hash() {
    let out = bin()
        .args([
            "valuations",
            "--q",
            "3",
            "--p",
            "theta",
            "--n",
            "0",
            "--seed-echo",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("seed: "));
}

#[test]
fn basis_certificate_written() {
    let path = std::env::temp_dir().join("carlitz_basis_cert.json");
    let out = bin()
        .args(["basis", "--q", "3", "--p", "theta", "--n", "1", "--certificate"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let cert: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(cert["dimension"], 6);
    assert_eq!(cert["determinant_is_unit"], true);
    let _ = std::fs::remove_file(&path);
}

#[test]
fn omega_dump_and_experiment_run() {
    let out = bin()
        .args(["omega", "--q", "2", "--p", "theta^2+theta+1", "--n", "0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("omega^(0)(zeta_1)"));

    let out = bin()
        .args([
            "experiment",
            "norm-factor",
            "--q",
            "2",
            "--p",
            "theta^2+theta+1",
            "--n",
            "1",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("factors"));
}

#[test]
fn lmatrix_with_analytic_crosscheck() {
    let out = bin()
        .args([
            "lmatrix", "--q", "2", "--p", "theta", "--n", "1", "--analytic", "8",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("analytic_agreement"));
}
