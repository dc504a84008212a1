use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hypgas_cli::report::{BoundCliReport, CertifyReport, ScatterReport, SweepReport, VerifyReport};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn hypgas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypgas"))
        .args(args)
        .env_remove("HYPGAS_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(text: &str) -> T {
    let parsed: T = serde_json::from_str(text).expect("report parses");
    let again = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
    assert_eq!(again, text, "re-serialization differs");
    let reparsed: T = serde_json::from_str(&again).unwrap();
    assert_eq!(parsed, reparsed);
    parsed
}

#[test]
fn scatter_hardcore_reports_support_radius() {
    let out = hypgas(&["scatter", "--potential", &path("hardcore_0.5.json"), "--d", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let report: ScatterReport = round_trip(&stdout(&out));
    assert_eq!(report.derived.a, 0.5);
    assert_eq!(report.derived.radius, 1.5);
    let f = &report.derived.profile.f;
    assert_eq!(f[0], 0.0);
    assert_eq!(f[f.len() - 1], 1.0);
}

#[test]
fn scatter_csv_has_profile_columns() {
    let out = hypgas(&[
        "scatter",
        "--potential",
        &path("two_step.json"),
        "--d",
        "3",
        "--format",
        "csv",
        "--profile-points",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "r,f");
    assert_eq!(lines.len(), 8);
}

#[test]
fn scatter_d3_reports_printed_energy_variant() {
    let out = hypgas(&["scatter", "--potential", &path("hardcore_0.5.json"), "--d", "3", "--R", "2"]);
    let report: ScatterReport = round_trip(&stdout(&out));
    let variant = &report.derived.printed_variants[0];
    assert_eq!(variant.quantity, "energy");
    assert!((variant.implemented_value - 11.153_860_321_247_916).abs() < 1e-9);
    assert!((variant.printed_value.unwrap() - 12.068_217_059_264_267).abs() < 1e-9);
}

#[test]
fn bound_with_free_gas() {
    let out = hypgas(&["bound", "--potential", &path("zero.json"), "--d", "2", "--rho", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let report: BoundCliReport = round_trip(&stdout(&out));
    assert_eq!(report.derived.a, 0.0);
    assert_eq!(report.derived.bounds.y, 0.0);
    assert_eq!(report.derived.bounds.energy_upper_per_particle, Some(0.0));
    assert_eq!(report.derived.bounds.fraction_lower, Some(1.0));
    assert!(report.warnings.is_empty());
}

#[test]
fn bound_warns_outside_regime() {
    let out = hypgas(&["bound", "--potential", &path("hardcore_0.5.json"), "--d", "3", "--rho", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let report: BoundCliReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.derived.bounds.energy_upper_per_particle, None);
    assert!(!report.warnings.is_empty());
}

#[test]
fn bound_printed_variant_in_two_dimensions() {
    let out = hypgas(&["bound", "--potential", &path("hardcore_0.5.json"), "--d", "2", "--rho", "0.01"]);
    let report: BoundCliReport = serde_json::from_str(&stdout(&out)).unwrap();
    let variant = &report.derived.bounds.printed_variants[0];
    assert_eq!(variant.quantity, "y");
    assert!(variant.printed_value.unwrap() > variant.implemented_value);
}

#[test]
fn certify_exit_codes_follow_the_outcome() {
    let base = ["certify", "--potential", &path("hardcore_0.01.json"), "--model", "modular", "--L", "50"];
    let ok = hypgas(&[&base[..], &["--N", "235"]].concat());
    assert_eq!(ok.status.code(), Some(0));
    let report: CertifyReport = round_trip(&stdout(&ok));
    assert!(report.derived.certified && report.derived.fraction_lower >= 0.9);

    let fail = hypgas(&[&base[..], &["--N", "236"]].concat());
    assert_eq!(fail.status.code(), Some(1));
    let report: CertifyReport = round_trip(&stdout(&fail));
    assert!(!report.derived.certified);
    assert!(report.derived.failure_reason.is_some());
}

#[test]
fn certify_rejects_incomplete_or_inconsistent_models() {
    let p = path("hardcore_0.01.json");
    let missing = hypgas(&["certify", "--potential", &p, "--model", "random", "--N", "10"]);
    assert_eq!(missing.status.code(), Some(2));
    let zero_gap = hypgas(&[
        "certify", "--potential", &p, "--model", "random", "--g", "3", "--alpha", "0.1875", "--N", "10",
    ]);
    assert_eq!(zero_gap.status.code(), Some(2));
    let policy = hypgas(&[
        "certify", "--potential", &p, "--model", "modular", "--L", "5", "--gap-policy", "mirzakhani", "--N", "10",
    ]);
    assert_eq!(policy.status.code(), Some(2));
    let custom = hypgas(&[
        "certify", "--potential", &p, "--model", "custom", "--d", "3", "--volume", "1e6", "--gap", "0.75", "--N", "10",
    ]);
    assert_eq!(custom.status.code(), Some(0));
}

#[test]
fn sweep_rows_and_order() {
    let out = hypgas(&[
        "sweep",
        "--potential",
        &path("two_step.json"),
        "--d",
        "2",
        "--axis",
        "eps:0.01:0.1:4",
        "--axis",
        "rho:1e-6:1e-3:5:log",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: SweepReport = round_trip(&stdout(&out));
    let rows = &report.derived.rows;
    assert_eq!(rows.len(), 20);
    let eps_col = report.derived.columns.iter().position(|c| c == "eps").unwrap();
    let rho_col = report.derived.columns.iter().position(|c| c == "rho").unwrap();
    // first axis slowest
    assert_eq!(rows[0][eps_col], Some(0.01));
    assert_eq!(rows[4][eps_col], Some(0.01));
    assert_eq!(rows[5][eps_col], Some(0.04));
    assert_eq!(rows[0][rho_col], Some(1e-6));
    assert_eq!(rows[4][rho_col], Some(1e-3));
}

#[test]
fn sweep_rejects_bad_axes() {
    let p = path("two_step.json");
    for axis in [["rho:1:2:3", "rho:1:2:2"], ["rho:0:1:3:log", "mu:1:2:2"], ["rho:2:1:3", "mu:1:2:2"]] {
        let out = hypgas(&["sweep", "--potential", &p, "--d", "2", "--axis", axis[0], "--axis", axis[1]]);
        assert_eq!(out.status.code(), Some(2), "{axis:?}");
    }
    let three = hypgas(&[
        "sweep", "--potential", &p, "--d", "2", "--axis", "rho:1:2:2", "--axis", "mu:1:2:2", "--axis", "eps:1:2:2",
    ]);
    assert_eq!(three.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let out = hypgas(&[
        "bound",
        "--potential",
        &path("hardcore_0.5.json"),
        "--d",
        "3",
        "--rho",
        "1e-3",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&target).unwrap();
    let _: BoundCliReport = round_trip(&text);
}

#[test]
fn verify_passes() {
    let out = hypgas(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: VerifyReport = round_trip(&stdout(&out));
    assert!(report.derived.passed);
    assert_eq!(report.derived.energy.len(), 12);
    assert_eq!(report.derived.profile.len(), 12);
    assert_eq!(report.derived.inequalities.cases.len(), 18);
}

#[test]
fn verify_rejects_csv() {
    assert_eq!(hypgas(&["verify", "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn invalid_thread_count_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_hypgas"))
        .args(["sweep", "--potential", &path("two_step.json"), "--d", "2", "--axis", "rho:1e-4:1e-3:2"])
        .env("HYPGAS_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
