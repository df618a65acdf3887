//! Self-contained validation suite: eight deterministic checks covering the
//! coefficient table, perturbation-vs-exact agreement, the budget optimum,
//! the closed-form transfer formula, the ideal protocol, decay accounting,
//! nonresonant blockade, and the structural invariants.
//!
//! Every check is pure and seeded, so repeated runs produce byte-identical
//! reports. Setting the environment variable `CATSIM_PERTURB_GOLDEN=1`
//! deliberately corrupts the stored coefficient golden value so that failure
//! reporting can be exercised end to end.

use crate::budget::{
    error_budget, nonresonant_populations, optimize_rabi, transfer_populations, BudgetInputs,
    TransferInputs,
};
use crate::config::ScenarioConfig;
use crate::dynamics::{
    evolve, BlockadeMode, DecaySpec, EvolveOptions, HamiltonianOp, HamiltonianSpec, StateVector,
};
use crate::dynamics::{run_protocol, ProtocolSpec};
use crate::error::Result;
use crate::model::{Frequency, GeometryKind, InteractionSet, Lattice, Mode, PairTable};
use crate::perturbation::{
    extract_coefficient, extract_coefficient_with_probe, validate_against_exact,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Outcome of one validation check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type CheckFn = fn() -> Result<(bool, String)>;

/// Runs all validation checks in a fixed order.
pub fn run_all_checks() -> Vec<CheckResult> {
    let checks: [(&'static str, CheckFn); 8] = [
        ("coefficient_table", check_coefficient_table),
        ("perturbation_vs_exact", check_perturbation_vs_exact),
        ("budget_optimum", check_budget_optimum),
        ("transfer_closed_form", check_transfer_closed_form),
        ("ideal_protocol", check_ideal_protocol),
        ("decay_norm_loss", check_decay_norm_loss),
        ("nonresonant_blockade", check_nonresonant_blockade),
        ("invariant_suite", check_invariant_suite),
    ];
    checks
        .iter()
        .map(|(name, check)| match check() {
            Ok((passed, detail)) => CheckResult {
                name,
                passed,
                detail,
            },
            Err(err) => CheckResult {
                name,
                passed: false,
                detail: format!("errored: {err}"),
            },
        })
        .collect()
}

/// Frozen golden value of the pair coefficient α₂, hardened against drift.
fn stored_alpha2_golden() -> f64 {
    let golden = 0.298786851986;
    if std::env::var("CATSIM_PERTURB_GOLDEN").as_deref() == Ok("1") {
        golden * 1.1
    } else {
        golden
    }
}

fn check_coefficient_table() -> Result<(bool, String)> {
    let computed = extract_coefficient(GeometryKind::Pair, 6, Mode::Resonant)?.value;
    let golden = stored_alpha2_golden();
    let golden_dev = (computed / golden - 1.0).abs();
    let reference_dev = (computed / 0.299 - 1.0).abs();
    let passed = golden_dev < 1e-3 && reference_dev < 0.03;
    Ok((
        passed,
        format!(
            "alpha_2 computed {computed:.9}, golden {golden:.9} ({:.2e} rel), reference 0.299 ({:.2e} rel)",
            golden_dev, reference_dev
        ),
    ))
}

fn check_perturbation_vs_exact() -> Result<(bool, String)> {
    let comparison = validate_against_exact(GeometryKind::Pair, 6, Mode::Resonant, 0.01)?;
    let passed = comparison.relative_gap <= 0.05;
    Ok((
        passed,
        format!(
            "pair probe 0.01: perturbative {:.6e}, exact {:.6e}, gap {:.2e}",
            comparison.perturbative, comparison.exact, comparison.relative_gap
        ),
    ))
}

fn check_budget_optimum() -> Result<(bool, String)> {
    let inputs = BudgetInputs {
        atom_count: 8,
        mode: Mode::Resonant,
        drive: Frequency::from_cyclic(1.0),
        tau_p_us: 57.0,
        delta_sp_at_d: Frequency::from_cyclic(14.4),
        delta_pp_at_d: Frequency::from_cyclic(0.019),
        blockade_pair_factor: 54.0 / 7.0,
        coefficient: 9.39,
    };
    let optimum = optimize_rabi(&inputs, 0.01, 10.0)?;
    let passed = (optimum.omega_star.cyclic() - 0.30).abs() <= 0.02
        && (optimum.e_min - 0.16).abs() <= 0.01;
    Ok((
        passed,
        format!(
            "optimum at {:.4} MHz with total {:.4} (expected 0.30 ± 0.02 MHz, 0.16 ± 0.01)",
            optimum.omega_star.cyclic(),
            optimum.e_min
        ),
    ))
}

/// Single-atom transfer-pulse evolution with a detuned |p⟩, used by the
/// closed-form and nonresonant checks.
pub fn single_atom_p1(omega_p: Frequency, detuning: Frequency, t_us: f64) -> Result<f64> {
    let lattice = Lattice::build(GeometryKind::Pair, 3.0, None)?.truncate(1)?;
    let interactions = InteractionSet::with_default_exponents(
        Frequency::ZERO,
        Frequency::ZERO,
        Frequency::ZERO,
    )?;
    let pairs = PairTable::build(&lattice, &interactions)?;
    let spec = HamiltonianSpec::step_two(omega_p, detuning, pairs, BlockadeMode::Ideal);
    let op = HamiltonianOp::new(&spec)?;
    let opts = EvolveOptions {
        tolerance: 1e-12,
        ..EvolveOptions::default()
    };
    let out = evolve(&op, &StateVector::ground(1), t_us, &opts)?;
    Ok(out.amplitudes()[1].norm_sqr())
}

fn check_transfer_closed_form() -> Result<(bool, String)> {
    let omega = Frequency::from_angular(1.0);
    let omega_p = Frequency::from_angular(2f64.sqrt());
    let t2 = 2f64.sqrt() * PI / omega_p.angular();
    let mut worst = 0f64;
    for ratio in [0.0, 2.0, 20.0] {
        let delta = Frequency::from_angular(ratio);
        let (_, formula) = transfer_populations(&TransferInputs::new(omega, delta)?)?;
        let numeric = single_atom_p1(omega_p, delta, t2)?;
        worst = worst.max((formula - numeric).abs());
    }
    Ok((
        worst <= 1e-6,
        format!("worst |closed form − numeric| in P1 over Δ/Ω ∈ {{0, 2, 20}}: {worst:.2e}"),
    ))
}

/// Ideal-limit protocol fidelity for a lattice truncated to `atom_count`.
pub fn ideal_protocol_fidelity(atom_count: usize) -> Result<f64> {
    let lattice = match atom_count {
        1 | 2 => Lattice::build(GeometryKind::Pair, 3.0, None)?,
        3 | 4 => Lattice::build(GeometryKind::Square4, 3.0, None)?,
        _ => Lattice::build(GeometryKind::Cube8, 3.0, None)?,
    }
    .truncate(atom_count)?;
    let interactions = InteractionSet::with_default_exponents(
        Frequency::from_cyclic(14.4),
        Frequency::ZERO,
        Frequency::from_cyclic(3.7),
    )?;
    let spec = ProtocolSpec::new(
        lattice,
        interactions,
        Frequency::from_cyclic(0.30),
        Frequency::from_cyclic(0.30 * 2f64.sqrt()),
    );
    Ok(run_protocol(&spec)?.fidelity)
}

fn check_ideal_protocol() -> Result<(bool, String)> {
    let mut worst = f64::INFINITY;
    for n in [2usize, 3] {
        worst = worst.min(ideal_protocol_fidelity(n)?);
    }
    Ok((
        worst >= 1.0 - 1e-9,
        format!("worst ideal-limit fidelity over N ∈ {{2, 3}}: 1 − {:.2e}", 1.0 - worst),
    ))
}

fn check_decay_norm_loss() -> Result<(bool, String)> {
    let loss = transfer_decay_loss(2, 50.0)?;
    let predicted = 2.0 * PI / (4.0 * 50.0);
    let deviation = (loss - predicted).abs() / predicted;
    Ok((
        deviation <= 0.10,
        format!("N=2, Ωτ=50: loss {loss:.6e} vs Nπ/(4Ωτ) = {predicted:.6e} ({deviation:.2e} rel)"),
    ))
}

/// Norm loss of the bare transfer pulse on N atoms with a decaying |p⟩,
/// at effective Rabi frequency Ω = 1 rad/μs and lifetime Ωτ·1 μs.
pub fn transfer_decay_loss(atom_count: usize, omega_tau: f64) -> Result<f64> {
    let lattice = match atom_count {
        1 | 2 => Lattice::build(GeometryKind::Pair, 3.0, None)?,
        3 | 4 => Lattice::build(GeometryKind::Square4, 3.0, None)?,
        _ => Lattice::build(GeometryKind::Cube8, 3.0, None)?,
    }
    .truncate(atom_count)?;
    let interactions = InteractionSet::with_default_exponents(
        Frequency::ZERO,
        Frequency::ZERO,
        Frequency::ZERO,
    )?;
    let pairs = PairTable::build(&lattice, &interactions)?;
    let omega_p = Frequency::from_angular(2f64.sqrt());
    let mut spec =
        HamiltonianSpec::step_two(omega_p, Frequency::ZERO, pairs, BlockadeMode::Ideal);
    spec.decay = Some(DecaySpec {
        tau_p_us: omega_tau,
        tau_s_us: None,
    });
    let op = HamiltonianOp::new(&spec)?;
    let opts = EvolveOptions {
        tolerance: 1e-12,
        ..EvolveOptions::default()
    };
    let out = evolve(&op, &StateVector::ground(atom_count), PI, &opts)?;
    Ok(1.0 - out.norm_sq())
}

fn check_nonresonant_blockade() -> Result<(bool, String)> {
    let omega_p = Frequency::from_angular(1.0);
    let delta0 = Frequency::from_angular(20.0);
    let shift = delta0;
    let t2 = 2.0 * PI * delta0.angular() / omega_p.angular().powi(2);
    let populations = nonresonant_populations(omega_p, delta0, shift, t2)?;
    let numeric = single_atom_p1(
        omega_p,
        Frequency::from_angular(delta0.angular() + shift.angular()),
        t2,
    )?;
    let diff = (populations.p1 - numeric).abs();
    Ok((
        diff <= 1e-3,
        format!(
            "Δ₀/Ω_p = 20, shift = Δ₀: formula P1 {:.6} vs numeric {numeric:.6} ({diff:.2e} abs)",
            populations.p1
        ),
    ))
}

fn check_invariant_suite() -> Result<(bool, String)> {
    let mut failures = Vec::new();

    // Norm conservation of the Hermitian integrator over a full transfer pulse.
    let lattice = Lattice::build(GeometryKind::Pair, 3.0, None)?;
    let interactions = InteractionSet::with_default_exponents(
        Frequency::from_cyclic(14.4),
        Frequency::from_cyclic(0.019),
        Frequency::from_cyclic(3.7),
    )?;
    let pairs = PairTable::build(&lattice, &interactions)?;
    let omega_p = Frequency::from_angular(2f64.sqrt());
    let spec = HamiltonianSpec::step_two(
        omega_p,
        Frequency::from_angular(2.0),
        pairs.clone(),
        BlockadeMode::Finite,
    );
    let op = HamiltonianOp::new(&spec)?;
    let opts = EvolveOptions::default();
    let out = evolve(&op, &StateVector::ground(2), PI, &opts)?;
    let drift = (out.norm_sq() - 1.0).abs();
    if drift > 1e-9 {
        failures.push(format!("norm drift {drift:.2e}"));
    }

    // Hermiticity spot check on seeded random states.
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut random_state = || {
        let mut amps: Vec<Complex64> = (0..16)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        StateVector::from_amplitudes(2, amps).unwrap()
    };
    let mut worst_hermiticity = 0f64;
    for _ in 0..4 {
        let phi = random_state();
        let psi = random_state();
        let h_psi = op.apply(&psi)?;
        let h_phi = op.apply(&phi)?;
        let forward = phi.inner(&h_psi)?;
        let backward = h_phi.inner(&psi)?;
        worst_hermiticity = worst_hermiticity.max((forward - backward).norm());
    }
    if worst_hermiticity > 1e-12 {
        failures.push(format!("hermiticity defect {worst_hermiticity:.2e}"));
    }

    // Config round trip is a fixed point.
    let config = ScenarioConfig::default_validated();
    let text = serde_json::to_string_pretty(&config)
        .map_err(|err| crate::error::Error::InvalidInput(err.to_string()))?;
    match ScenarioConfig::from_json(&text) {
        Ok(reparsed) if reparsed == config => {}
        Ok(_) => failures.push("config round trip changed the config".to_string()),
        Err(err) => failures.push(format!("config round trip failed: {err}")),
    }

    // Coefficient probe invariance.
    let base = extract_coefficient_with_probe(GeometryKind::Pair, 6, Mode::Resonant, 1e-3)?;
    let doubled = extract_coefficient_with_probe(GeometryKind::Pair, 6, Mode::Resonant, 2e-3)?;
    let probe_dev = (doubled.value / base.value - 1.0).abs();
    if probe_dev > 1e-3 {
        failures.push(format!("probe sensitivity {probe_dev:.2e}"));
    }

    // Cube pair-distance multiset exactness.
    let cube = Lattice::build(GeometryKind::Cube8, 3.0, None)?;
    let mut counts = [0usize; 3];
    let mut exact = true;
    for (_, _, r) in cube.pairs() {
        let r2 = r * r;
        let nearest = r2.round();
        if (r2 - nearest).abs() > 1e-12 || !(1.0..=3.0).contains(&nearest) {
            exact = false;
            break;
        }
        counts[nearest as usize - 1] += 1;
    }
    if !exact || counts != [12, 12, 4] {
        failures.push(format!("cube distance multiset {counts:?}"));
    }

    if failures.is_empty() {
        Ok((
            true,
            format!(
                "norm drift {drift:.2e}, hermiticity defect {worst_hermiticity:.2e}, config fixed point, probe sensitivity {probe_dev:.2e}, cube multiset (12, 12, 4)"
            ),
        ))
    } else {
        Ok((false, failures.join("; ")))
    }
}

/// Budget total for the reference cube at the reference drive, used by tests.
pub fn reference_budget_total() -> Result<f64> {
    let config = ScenarioConfig::default_validated();
    Ok(error_budget(&config.budget_inputs(9.39)?)?.total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for check in run_all_checks() {
            assert!(check.passed, "{} failed: {}", check.name, check.detail);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let first = run_all_checks();
        let second = run_all_checks();
        for (a, b) in first.iter().zip(&second) {
            assert_eq!(a.name, b.name);
            assert_eq!(a.passed, b.passed);
            assert_eq!(a.detail, b.detail);
        }
    }

    #[test]
    fn decay_loss_is_linear_in_atom_number() {
        // Frozen transfer-pulse losses at Ωτ = 50.
        for (n, frozen) in [(1, 0.0154639771), (2, 0.0306888197)] {
            let loss = transfer_decay_loss(n, 50.0).unwrap();
            assert!(
                (loss / frozen - 1.0).abs() < 1e-6,
                "N={n}: loss {loss} vs frozen {frozen}"
            );
        }
    }

    #[test]
    fn reference_budget_total_matches_frozen_value() {
        let total = reference_budget_total().unwrap();
        assert!((total - 0.1622349664).abs() < 1e-9, "total {total}");
    }
}
