//! Command-line interface: scenario configuration in, machine-readable
//! results out.
//!
//! Commands: `coefficients`, `budget`, `sweep`, `simulate`, `validate`.
//! Results are JSON records (CSV for sweeps) with a stable schema. Exit
//! codes: 0 success, 1 validation failure, 2 configuration or argument
//! error, 3 numerical fault.

use catsim::budget::{error_budget, interior_minimum, sweep, SweepRow};
use catsim::config::{OutputFormat, ScenarioConfig, SCHEMA_VERSION};
use catsim::dynamics::run_protocol;
use catsim::error::{Error, Result};
use catsim::model::{GeometryKind, Mode};
use catsim::perturbation::{
    coefficient_for_lattice, extract_coefficient, reference_coefficient, DEFAULT_PROBE_RATIO,
};
use catsim::validate::run_all_checks;
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "catsim",
    version,
    about = "Simulator and error-budget toolkit for asymmetric-blockade cat-state preparation"
)]
struct Cli {
    /// Path to a JSON scenario configuration (defaults are used when omitted).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output format: json (default for most commands) or csv (sweep only).
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Write the primary output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract a transfer-error coefficient for a geometry, exponent, and mode.
    Coefficients {
        /// Lattice geometry: pair, square4, or cube8.
        #[arg(long)]
        geometry: Option<GeometryKind>,
        /// Interaction exponent for the p-p coupling: 0 or 6.
        #[arg(long)]
        exponent: Option<i32>,
        /// Transfer mode: resonant or nonresonant.
        #[arg(long)]
        mode: Option<Mode>,
    },
    /// Evaluate the three-term error budget for the configured scenario.
    Budget,
    /// Sweep the budget over a logarithmic drive-frequency grid.
    Sweep {
        /// Lower edge of the drive-frequency grid in MHz.
        #[arg(long, default_value_t = 0.05)]
        omega_min: f64,
        /// Upper edge of the drive-frequency grid in MHz.
        #[arg(long, default_value_t = 3.0)]
        omega_max: f64,
        /// Number of grid points.
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Run the full three-pulse protocol and compare with the budget model.
    Simulate,
    /// Run the built-in validation suite and report each check.
    Validate,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    };
    std::process::exit(code);
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::NonFinite(_) | Error::IntegratorFailure { .. } | Error::PopulationOutOfRange(_) => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<i32> {
    let started = Instant::now();
    let config = match &cli.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default_validated(),
    };
    let format = cli
        .format
        .or(config.outputs.format)
        .unwrap_or(match cli.command {
            Command::Sweep { .. } => OutputFormat::Csv,
            _ => OutputFormat::Json,
        });
    let out_path = cli.out.clone().or_else(|| config.outputs.path.clone());

    match cli.command {
        Command::Coefficients {
            geometry,
            exponent,
            mode,
        } => {
            require_json(format, "coefficients")?;
            let geometry = geometry.unwrap_or(config.geometry.kind);
            let exponent = exponent.unwrap_or(config.interactions.gamma_pp);
            let mode = mode.unwrap_or(config.drive.mode);
            let payload = cmd_coefficients(geometry, exponent, mode)?;
            emit_record(&config, "coefficients", payload, started, out_path.as_deref())?;
            Ok(0)
        }
        Command::Budget => {
            require_json(format, "budget")?;
            let payload = cmd_budget(&config)?;
            emit_record(&config, "budget", payload, started, out_path.as_deref())?;
            Ok(0)
        }
        Command::Sweep {
            omega_min,
            omega_max,
            points,
        } => {
            let (rows, minimum) = cmd_sweep(&config, omega_min, omega_max, points)?;
            match minimum {
                Some(row) => eprintln!(
                    "interior minimum: omega_mhz = {}, e_total = {}",
                    row.omega_mhz, row.e_total
                ),
                None => eprintln!("no interior minimum bracketed by the sweep range"),
            }
            match format {
                OutputFormat::Csv => emit_csv(&rows, out_path.as_deref())?,
                OutputFormat::Json => {
                    let mut payload = json!({
                        "rows": serde_json::to_value(&rows).map_err(json_fault)?,
                    });
                    if let Some(row) = minimum {
                        payload["interior_minimum"] =
                            serde_json::to_value(row).map_err(json_fault)?;
                    }
                    emit_record(&config, "sweep", payload, started, out_path.as_deref())?;
                }
            }
            Ok(0)
        }
        Command::Simulate => {
            require_json(format, "simulate")?;
            let payload = cmd_simulate(&config)?;
            emit_record(&config, "simulate", payload, started, out_path.as_deref())?;
            Ok(0)
        }
        Command::Validate => {
            let mut all_passed = true;
            let mut lines = String::new();
            for check in run_all_checks() {
                let verdict = if check.passed { "[PASS]" } else { "[FAIL]" };
                all_passed &= check.passed;
                lines.push_str(&format!("{verdict} {} — {}\n", check.name, check.detail));
            }
            write_output(&lines, out_path.as_deref())?;
            Ok(if all_passed { 0 } else { 1 })
        }
    }
}

fn require_json(format: OutputFormat, command: &str) -> Result<()> {
    if format == OutputFormat::Csv {
        return Err(Error::InvalidInput(format!(
            "the {command} command emits JSON records; csv is only available for sweep"
        )));
    }
    Ok(())
}

fn json_fault(err: serde_json::Error) -> Error {
    Error::NonFinite(format!("payload serialization failed: {err}"))
}

fn cmd_coefficients(geometry: GeometryKind, exponent: i32, mode: Mode) -> Result<Value> {
    let result = extract_coefficient(geometry, exponent, mode)?;
    let mut payload = json!({
        "coefficient": result.value,
        "geometry": result.geometry,
        "exponent": result.exponent,
        "mode": result.mode,
        "atom_count": result.atom_count,
        "probe_ratio": DEFAULT_PROBE_RATIO,
        "reference_case": false,
    });
    if let Some(reference) = reference_coefficient(geometry, exponent, mode) {
        payload["reference_case"] = json!(true);
        payload["reference_value"] = json!(reference);
        payload["relative_deviation"] = json!(result.value / reference - 1.0);
    }
    Ok(payload)
}

fn cmd_budget(config: &ScenarioConfig) -> Result<Value> {
    let lattice = config.lattice()?;
    let coefficient = if lattice.atom_count() < 2 {
        0.0
    } else {
        coefficient_for_lattice(
            &lattice,
            config.interactions.gamma_pp,
            config.drive.mode,
            DEFAULT_PROBE_RATIO,
        )?
    };
    let inputs = config.budget_inputs(coefficient)?;
    let budget = error_budget(&inputs)?;
    Ok(json!({
        "atom_count": inputs.atom_count,
        "mode": inputs.mode,
        "drive_mhz": inputs.drive.cyclic(),
        "coefficient": coefficient,
        "blockade_pair_factor": inputs.blockade_pair_factor,
        "budget": serde_json::to_value(budget).map_err(json_fault)?,
    }))
}

fn cmd_sweep(
    config: &ScenarioConfig,
    omega_min: f64,
    omega_max: f64,
    points: usize,
) -> Result<(Vec<SweepRow>, Option<SweepRow>)> {
    let lattice = config.lattice()?;
    let coefficient = if lattice.atom_count() < 2 {
        0.0
    } else {
        coefficient_for_lattice(
            &lattice,
            config.interactions.gamma_pp,
            config.drive.mode,
            DEFAULT_PROBE_RATIO,
        )?
    };
    let inputs = config.budget_inputs(coefficient)?;
    let rows = sweep(&inputs, omega_min, omega_max, points)?;
    let minimum = interior_minimum(&rows).map(|index| rows[index]);
    Ok((rows, minimum))
}

fn cmd_simulate(config: &ScenarioConfig) -> Result<Value> {
    let spec = config.protocol_spec()?;
    let lattice = config.lattice()?;
    let result = run_protocol(&spec)?;
    let coefficient = if lattice.atom_count() < 2 {
        0.0
    } else {
        coefficient_for_lattice(
            &lattice,
            config.interactions.gamma_pp,
            config.drive.mode,
            DEFAULT_PROBE_RATIO,
        )?
    };
    let budget = error_budget(&config.budget_inputs(coefficient)?)?;
    Ok(json!({
        "atom_count": lattice.atom_count(),
        "fidelity": result.fidelity,
        "infidelity": 1.0 - result.fidelity,
        "norm_loss": result.norm_loss,
        "t1_us": result.t1_us,
        "t2_us": result.t2_us,
        "budget_model": {
            "coefficient": coefficient,
            "prediction": serde_json::to_value(budget).map_err(json_fault)?,
        },
    }))
}

#[derive(Serialize)]
struct ResultRecord<'a> {
    schema_version: u32,
    command: &'a str,
    config: Value,
    payload: Value,
    version: &'static str,
    wall_time_ms: f64,
}

fn emit_record(
    config: &ScenarioConfig,
    command: &str,
    payload: Value,
    started: Instant,
    out_path: Option<&std::path::Path>,
) -> Result<()> {
    ensure_finite(&payload)?;
    let record = ResultRecord {
        schema_version: SCHEMA_VERSION,
        command,
        config: serde_json::to_value(config).map_err(json_fault)?,
        payload,
        version: env!("CARGO_PKG_VERSION"),
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    let text = serde_json::to_string_pretty(&record).map_err(json_fault)?;
    write_output(&format!("{text}\n"), out_path)
}

/// Rejects payloads containing non-finite numbers (serialized as null).
fn ensure_finite(payload: &Value) -> Result<()> {
    match payload {
        Value::Null => Err(Error::NonFinite("payload contains a non-finite number".into())),
        Value::Array(items) => items.iter().try_for_each(ensure_finite),
        Value::Object(map) => map.values().try_for_each(ensure_finite),
        _ => Ok(()),
    }
}

fn emit_csv(rows: &[SweepRow], out_path: Option<&std::path::Path>) -> Result<()> {
    let mut text = String::from("omega_mhz,e_se,e_bl,e_tr,e_total\n");
    for row in rows {
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            row.omega_mhz, row.e_se, row.e_bl, row.e_tr, row.e_total
        ));
    }
    write_output(&text, out_path)
}

fn write_output(text: &str, out_path: Option<&std::path::Path>) -> Result<()> {
    match out_path {
        Some(path) => std::fs::write(path, text).map_err(|err| Error::Config {
            path: path.display().to_string(),
            message: format!("could not write output: {err}"),
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|err| Error::InvalidInput(format!("could not write to stdout: {err}")))
        }
    }
}
