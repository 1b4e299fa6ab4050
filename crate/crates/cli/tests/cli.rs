use std::process::{Command, Output};

use etacert::sdp::SdpInterchange;
use serde_json::Value;

fn etacert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_etacert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn point_matches_first_table_row() {
    let o = etacert(&["point", "--e", "0.006951"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let qr = v["eta_qr"]["eta"].as_f64().unwrap();
    let npa = v["eta_npa"][0]["eta"].as_f64().unwrap();
    let ns = v["eta_ns"].as_f64().unwrap();
    assert!((qr - 0.753774).abs() < 1e-4, "{qr}");
    assert!((npa - 0.753773).abs() < 1e-5, "{npa}");
    assert!((ns - 0.68305).abs() < 1e-5, "{ns}");
    assert_eq!(v["eta_qr"]["angles"].as_array().unwrap().len(), 5);
}

#[test]
fn point_with_dark_counts() {
    let o = etacert(&[
        "point", "--e", "0.006951", "--xi", "0.01", "--format", "csv",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let qr: f64 = row[1].parse().unwrap();
    let npa: f64 = row[4].parse().unwrap();
    assert!((qr - 0.80656515).abs() < 1e-4);
    assert!((npa - 0.80656469).abs() < 1e-4);
    assert_eq!(row[5], "");
}

#[test]
fn infeasible_violation_fails_with_maximum() {
    let o = etacert(&["point", "--e", "0.3"]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(
        err.contains("exceeds the quantum maximum 0.207107"),
        "{err}"
    );
}

#[test]
fn sweep_csv_is_deterministic() {
    let args = [
        "sweep",
        "--e",
        "0.01,0.05",
        "--outputs",
        "qr,analytic",
        "--seed",
        "7",
    ];
    let a = etacert(&args);
    let b = etacert(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "e_obs,eta_qr,eta_npa_l1,eta_npa_l1ab,eta_npa_l2,eta_ns,xi,wall_time,status"
    );
    assert_eq!(lines.count(), 2);
}

#[test]
fn sweep_records_infeasible_rows() {
    let o = etacert(&[
        "sweep",
        "--e",
        "0.01,0.2",
        "--xi",
        "0.01",
        "--outputs",
        "npa",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert!(rows[0].ends_with(",ok"));
    assert!(rows[1].contains("infeasible"), "{}", rows[1]);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let out = dir.path().join("out.json");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"e": [0.02, 0.04], "xi": 0.3, "outputs": ["analytic"], "format": "json", "out": {:?}}}"#,
            out
        ),
    )
    .unwrap();
    let o = etacert(&["--config", cfg.to_str().unwrap(), "sweep", "--xi", "0"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["xi"].as_f64(), Some(0.0));
    assert!(rows[1]["eta_ns"].as_f64().is_some());
}

#[test]
fn validate_core_passes() {
    let o = etacert(&["validate", "core", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn validate_rejects_unknown_suite() {
    assert!(!etacert(&["validate", "bogus"]).status.success());
}

#[test]
fn export_sdp_round_trips() {
    let o = etacert(&["export-sdp", "--level", "2", "--eta", "0.9"]);
    assert!(o.status.success());
    let sdp = SdpInterchange::from_json(&stdout(&o)).unwrap();
    assert_eq!(sdp.dimension, 13);
    sdp.to_dense().unwrap();
}

#[test]
fn thread_cap_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_etacert"))
        .args(["point", "--e", "0.01", "--outputs", "analytic"])
        .env("ETACERT_THREADS", "0")
        .output()
        .unwrap();
    assert!(!o.status.success());
}
