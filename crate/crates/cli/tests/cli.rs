use std::process::{Command, Output};

use chebrad_core::AnalysisReport;

fn chebrad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chebrad"))
        .args(args)
        .env_remove("CHEBRAD_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn analyze_t0_json() {
    let o = chebrad(&["analyze", "--ell", "3", "--n", "3", "--t", "451251", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("\"ind_3\": 13"));
    let report = AnalysisReport::from_json(&text).unwrap();
    assert_eq!(report.schema_version, 1);
    assert_eq!(report.field_disc.value.exponent_of(&3.into()), Some(55));
}

#[test]
fn analyze_monogenic_instance() {
    let o = chebrad(&["analyze", "--ell", "3", "--n", "1", "--t", "1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"monogenic\": \"yes\""));
}

#[test]
fn bad_ell_is_a_usage_error() {
    assert_eq!(chebrad(&["analyze", "--ell", "4", "--n", "1", "--t", "1"]).status.code(), Some(1));
    assert_eq!(chebrad(&["analyze", "--ell", "9", "--n", "1", "--t", "1"]).status.code(), Some(1));
    assert_eq!(chebrad(&["analyze", "--ell", "3"]).status.code(), Some(1));
    assert_eq!(chebrad(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn out_of_theory_exit_code() {
    // 11 = 2 mod 9
    let o = chebrad(&["analyze", "--ell", "3", "--n", "1", "--t", "11"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    let v: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(v["status"], "out-of-theory");
    // reducible: T_3(x) - 2 = (x - 2)(x + 1)^2
    assert_eq!(chebrad(&["analyze", "--ell", "3", "--n", "1", "--t", "2"]).status.code(), Some(2));
}

#[test]
fn negative_t_is_accepted() {
    let o = chebrad(&["analyze", "--ell", "3", "--n", "1", "--t", "-1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"t\": \"-1\""));
}

#[test]
fn text_and_json_agree() {
    let text = stdout(&chebrad(&["analyze", "--ell", "3", "--n", "1", "--t", "27"]));
    let json = stdout(&chebrad(&["analyze", "--ell", "3", "--n", "1", "--t", "27", "--json"]));
    let report = AnalysisReport::from_json(&json).unwrap();
    let delta = report.field_disc.numeric_if_complete().unwrap().to_string();
    assert_eq!(delta, "-87");
    assert!(text.contains(&format!("= {delta}")));
    for (k, v) in &report.indices {
        assert!(text.contains(&format!("{k} = {v}")), "{k}");
    }
}

#[test]
fn reports_are_deterministic_and_seeded_from_env() {
    let args = ["analyze", "--ell", "5", "--n", "2", "--t", "124", "--json"];
    assert_eq!(chebrad(&args).stdout, chebrad(&args).stdout);
    let o = Command::new(env!("CARGO_BIN_EXE_chebrad")).args(args).env("CHEBRAD_SEED", "17").output().unwrap();
    let report = AnalysisReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(report.seed, 17);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = chebrad(&["analyze", "--ell", "3", "--n", "2", "--t", "1", "--json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let report = AnalysisReport::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report.inputs.degree, 9);
}

#[test]
fn polygon_vertices_at_ell() {
    let o = chebrad(&["polygon", "--ell", "3", "--n", "3", "--t", "451251"]);
    let s = stdout(&o);
    assert!(s.contains("vertices: (0,6) (1,3) (3,2) (9,1) (27,0)"));
    assert!(s.contains("ind = 13"));
    let s = stdout(&chebrad(&["polygon", "--ell", "5", "--n", "3", "--t", "451251", "--prime", "5"]));
    assert!(s.contains("vertices: (0,4) (1,3) (5,2) (25,1) (125,0)"));
    let s = stdout(&chebrad(&["polygon", "--ell", "7", "--n", "3", "--t", "451251"]));
    assert!(s.contains("vertices: (0,2) (49,1) (343,0)"));
    assert!(s.contains("ind = 49"));
}

#[test]
fn polygon_svg_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.svg");
    let o = chebrad(&["polygon", "--ell", "3", "--n", "3", "--t", "451251", "--svg", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("ind = 13"));
    assert!(svg.trim_end().ends_with("</svg>"));
}

#[test]
fn orbit_graphs() {
    let o = chebrad(&["orbit", "--ell", "5", "--prime", "7", "--m", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("weight=").count(), 49);
    assert!(String::from_utf8(o.stderr).unwrap().contains("nodes: 49"));
    let o = chebrad(&["orbit", "--ell", "3", "--prime", "2", "--m", "1"]);
    assert_eq!(stdout(&o).matches("weight=").count(), 2);
    assert_eq!(chebrad(&["orbit", "--ell", "5", "--prime", "7", "--m", "10"]).status.code(), Some(3));
}

#[test]
fn verify_disc_oracle_sweep() {
    let o = chebrad(&["verify", "--sweep", "disc-oracle", "--ell", "3", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("21/21"));
}

#[test]
fn verify_default_is_deterministic() {
    let a = chebrad(&["verify", "--seed", "5"]);
    let b = chebrad(&["verify", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let s = stdout(&a);
    assert!(s.contains("examples     ell=7 n=3"));
    assert!(!s.contains("FAIL"));
}

#[test]
fn density_json() {
    let o = chebrad(&["density", "--ell", "3", "--prime-bound", "1000", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["prefactor"], serde_json::json!([8, 9]));
}
