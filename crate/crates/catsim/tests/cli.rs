//! End-to-end tests of the `catsim` binary: exit codes, output formats,
//! determinism, and error reporting.

use std::path::Path;
use std::process::{Command, Output};

fn catsim() -> Command {
    Command::new(env!("CARGO_BIN_EXE_catsim"))
}

fn run(args: &[&str]) -> Output {
    catsim().args(args).output().expect("binary should spawn")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout should be UTF-8")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr should be UTF-8")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn validate_passes_and_is_deterministic() {
    let first = run(&["validate"]);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr_of(&first));
    let report = stdout_of(&first);
    assert_eq!(report.matches("[PASS]").count(), 8, "report:\n{report}");
    assert!(!report.contains("[FAIL]"), "report:\n{report}");

    let second = run(&["validate"]);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout, "reports must be byte-identical");
}

#[test]
fn perturbed_golden_fails_the_coefficient_check() {
    let output = catsim()
        .args(["validate"])
        .env("CATSIM_PERTURB_GOLDEN", "1")
        .output()
        .expect("binary should spawn");
    assert_eq!(output.status.code(), Some(1));
    let report = stdout_of(&output);
    assert!(
        report.contains("[FAIL] coefficient_table"),
        "report:\n{report}"
    );
}

#[test]
fn sweep_csv_header_is_frozen() {
    let output = run(&["sweep", "--points", "5"]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr_of(&output));
    let body = stdout_of(&output);
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("omega_mhz,e_se,e_bl,e_tr,e_total"));
    assert_eq!(lines.count(), 5, "one data row per grid point");
    assert!(
        stderr_of(&output).contains("interior minimum"),
        "the bracketed minimum goes to stderr"
    );
}

#[test]
fn sweep_grids_nest() {
    let coarse = run(&["sweep", "--points", "5"]);
    let fine = run(&["sweep", "--points", "9"]);
    assert_eq!(coarse.status.code(), Some(0));
    assert_eq!(fine.status.code(), Some(0));
    let first_column = |body: &str| -> Vec<f64> {
        body.lines()
            .skip(1)
            .map(|line| line.split(',').next().unwrap().parse().unwrap())
            .collect()
    };
    let coarse_omegas = first_column(&stdout_of(&coarse));
    let fine_omegas = first_column(&stdout_of(&fine));
    for (k, omega) in coarse_omegas.iter().enumerate() {
        let nested = fine_omegas[2 * k];
        assert!(
            (nested / omega - 1.0).abs() < 1e-12,
            "doubling the resolution must reproduce shared abscissae: {omega} vs {nested}"
        );
    }
}

#[test]
fn unknown_config_key_exits_2_naming_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "bad.json",
        r#"{"drive": {"omega_q_mhz": 1.0}}"#,
    );
    let output = run(&["budget", "--config", &config]);
    assert_eq!(output.status.code(), Some(2));
    assert!(
        stderr_of(&output).contains("drive.omega_q_mhz"),
        "stderr: {}",
        stderr_of(&output)
    );
}

#[test]
fn missing_config_file_exits_2() {
    let output = run(&["budget", "--config", "/nonexistent/config.json"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("/nonexistent/config.json"));
}

#[test]
fn csv_is_rejected_outside_sweep() {
    let output = run(&["budget", "--format", "csv"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(
        stderr_of(&output).contains("sweep"),
        "stderr: {}",
        stderr_of(&output)
    );
}

#[test]
fn inverted_sweep_range_exits_2() {
    let output = run(&["sweep", "--omega-min", "2.0", "--omega-max", "0.1"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(
        stderr_of(&output).contains("ordered"),
        "stderr: {}",
        stderr_of(&output)
    );
}

#[test]
fn bad_exponent_exits_2() {
    let output = run(&["coefficients", "--geometry", "pair", "--exponent", "3"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn simulate_reaches_ideal_fidelity_for_three_atoms() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "three.json",
        r#"{
            "geometry": {"atom_count": 3},
            "interactions": {"delta_pp_at_d_mhz": 0.0}
        }"#,
    );
    let output = run(&["simulate", "--config", &config]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr_of(&output));
    let record: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert_eq!(record["schema_version"], 1);
    assert_eq!(record["command"], "simulate");
    assert_eq!(record["payload"]["atom_count"], 3);
    let fidelity = record["payload"]["fidelity"].as_f64().unwrap();
    assert!(
        fidelity >= 1.0 - 1e-9,
        "ideal-limit fidelity should be unity, got {fidelity}"
    );
}

#[test]
fn out_flag_writes_the_record_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pair.json");
    let output = run(&[
        "coefficients",
        "--geometry",
        "pair",
        "--exponent",
        "6",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr_of(&output));
    assert!(stdout_of(&output).is_empty(), "output was redirected to the file");
    let record: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let payload = &record["payload"];
    let coefficient = payload["coefficient"].as_f64().unwrap();
    assert!((coefficient - 0.298786851986).abs() < 1e-9);
    assert_eq!(payload["reference_case"], true);
    assert_eq!(payload["reference_value"].as_f64().unwrap(), 0.299);
    assert!(payload["relative_deviation"].as_f64().unwrap().abs() < 0.03);
}

#[test]
fn format_precedence_is_flag_over_config_over_default() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "json-out.json",
        r#"{"outputs": {"format": "json"}}"#,
    );
    // The config overrides sweep's CSV default…
    let json_run = run(&["sweep", "--points", "3", "--config", &config]);
    assert_eq!(json_run.status.code(), Some(0), "stderr: {}", stderr_of(&json_run));
    let record: serde_json::Value = serde_json::from_str(&stdout_of(&json_run)).unwrap();
    assert_eq!(record["command"], "sweep");
    assert_eq!(record["payload"]["rows"].as_array().unwrap().len(), 3);

    // …and the flag overrides the config.
    let csv_run = run(&[
        "sweep", "--points", "3", "--config", &config, "--format", "csv",
    ]);
    assert_eq!(csv_run.status.code(), Some(0));
    assert!(stdout_of(&csv_run).starts_with("omega_mhz,"));
}
