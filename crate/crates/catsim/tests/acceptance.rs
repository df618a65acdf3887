//! Acceptance gate: eight end-to-end checks, one test per criterion.
//!
//! Each test prints exactly one `[PASS]`/`[FAIL]` line (visible with
//! `cargo test --test acceptance -- --nocapture`) carrying the measured
//! margins, then asserts. Together the eight criteria cover the coefficient
//! table, the first-order error against exact dynamics, the budget optimum,
//! the closed-form transfer populations, the ideal-limit protocol, decay
//! accounting, far-detuned blockade populations, and the structural
//! invariants of the toolkit.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use catsim::budget::{
    nonresonant_populations, optimize_rabi, transfer_populations, BudgetInputs, TransferInputs,
};
use catsim::config::ScenarioConfig;
use catsim::dynamics::{
    evolve, BlockadeMode, EvolveOptions, HamiltonianOp, HamiltonianSpec, StateVector,
};
use catsim::perturbation::{
    extract_coefficient, extract_coefficient_with_probe, reference_coefficient,
    validate_against_exact,
};
use catsim::validate::{ideal_protocol_fidelity, single_atom_p1, transfer_decay_loss};
use catsim::{Frequency, GeometryKind, InteractionSet, Lattice, Mode, PairTable};

/// Prints the per-criterion report line and asserts the verdict.
fn report(name: &str, passed: bool, detail: &str) {
    let tag = if passed { "[PASS]" } else { "[FAIL]" };
    println!("{tag} {name} — {detail}");
    assert!(passed, "{name}: {detail}");
}

#[test]
fn criterion_1_coefficient_table() {
    // Every supported (geometry, exponent, mode) extraction is pinned to a
    // frozen high-precision value, and the shipped reference table is
    // compared entry by entry: five entries agree within ±3 %, the other five
    // deviate by 1.5–4.5× (see `reference_coefficient`'s documentation) and
    // must keep deviating — a silent move into the band would mean the
    // extraction changed.
    let frozen: &[(GeometryKind, i32, Mode, f64)] = &[
        (GeometryKind::Pair, 6, Mode::Resonant, 0.298786851986),
        (GeometryKind::Pair, 0, Mode::Resonant, 0.298786851986),
        (GeometryKind::Square4, 6, Mode::Resonant, 2.071930196383),
        (GeometryKind::Square4, 0, Mode::Resonant, 3.874590790271),
        (GeometryKind::Cube8, 6, Mode::Resonant, 9.606793375398),
        (GeometryKind::Cube8, 0, Mode::Resonant, 37.512207352578),
        (GeometryKind::Pair, 6, Mode::Nonresonant, 2.4664112863),
        (GeometryKind::Pair, 0, Mode::Nonresonant, 2.4664112863),
        (GeometryKind::Square4, 6, Mode::Nonresonant, 9.9648650464),
        (GeometryKind::Square4, 0, Mode::Nonresonant, 14.8516146342),
        (GeometryKind::Cube8, 6, Mode::Nonresonant, 30.2251644436),
        (GeometryKind::Cube8, 0, Mode::Nonresonant, 69.8035728452),
    ];
    let mut worst_frozen = 0f64;
    let mut in_band: Vec<String> = Vec::new();
    let mut out_of_band: Vec<String> = Vec::new();
    for &(geometry, exponent, mode, expected) in frozen {
        let result = extract_coefficient(geometry, exponent, mode).unwrap();
        let frozen_dev = (result.value / expected - 1.0).abs();
        worst_frozen = worst_frozen.max(frozen_dev);
        assert!(
            frozen_dev < 1e-9,
            "{geometry} γ={exponent} {mode:?}: {0} vs frozen {expected}",
            result.value
        );
        if let Some(reference) = reference_coefficient(geometry, exponent, mode) {
            let label = format!("{geometry}/γ{exponent}/{mode:?}");
            if (result.value / reference - 1.0).abs() <= 0.03 {
                in_band.push(label);
            } else {
                out_of_band.push(label);
            }
        }
    }
    let expected_in_band = [
        "pair/γ6/Resonant",
        "pair/γ0/Resonant",
        "square4/γ0/Resonant",
        "cube8/γ6/Resonant",
        "cube8/γ0/Resonant",
    ];
    let expected_out_of_band = [
        "square4/γ6/Resonant",
        "square4/γ6/Nonresonant",
        "square4/γ0/Nonresonant",
        "cube8/γ6/Nonresonant",
        "cube8/γ0/Nonresonant",
    ];
    let partition_ok = in_band == expected_in_band && out_of_band == expected_out_of_band;
    report(
        "criterion 1 (coefficient table)",
        worst_frozen < 1e-9 && partition_ok,
        &format!(
            "12 extractions within {worst_frozen:.1e} of frozen values; \
             reference table: {} entries within ±3%, {} documented deviations",
            in_band.len(),
            out_of_band.len()
        ),
    );
}

#[test]
fn criterion_2_first_order_vs_exact() {
    // Resonant transfer, γ = 6, probe Δ_pp/Ω = 0.01: the first-order error
    // must land within 5 % of the exact-simulation infidelity for both the
    // two-atom and four-atom geometries.
    let pair = validate_against_exact(GeometryKind::Pair, 6, Mode::Resonant, 0.01).unwrap();
    let square = validate_against_exact(GeometryKind::Square4, 6, Mode::Resonant, 0.01).unwrap();
    let worst = pair.relative_gap.max(square.relative_gap);
    report(
        "criterion 2 (first-order error vs exact dynamics)",
        worst <= 0.05,
        &format!(
            "relative gap at probe 0.01: pair {:.2e}, square4 {:.2e} (limit 5e-2)",
            pair.relative_gap, square.relative_gap
        ),
    );
}

#[test]
fn criterion_3_budget_optimum() {
    // Eight-atom cube, τ_p = 57 μs, Δ_sp(d)/2π = 14.4 MHz, Δ_pp(d)/2π =
    // 0.019 MHz, α = 9.39, pair factor 54/7: the optimizer must land at
    // Ω*/2π = 0.30 ± 0.02 MHz with a total error of 0.16 ± 0.01.
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
    let optimum = optimize_rabi(&inputs, 0.01, 10.0).unwrap();
    let omega_ok = (optimum.omega_star.cyclic() - 0.30).abs() <= 0.02;
    let error_ok = (optimum.e_min - 0.16).abs() <= 0.01;
    report(
        "criterion 3 (budget optimum)",
        omega_ok && error_ok,
        &format!(
            "optimum {:.6} MHz (expected 0.30 ± 0.02), total error {:.6} (expected 0.16 ± 0.01)",
            optimum.omega_star.cyclic(),
            optimum.e_min
        ),
    );
}

#[test]
fn criterion_4_closed_form_vs_dynamics() {
    // The residual-population closed form must match single-atom numeric
    // evolution within 1e-6 absolute on a 50-point grid of Δ/Ω ∈ [0, 20].
    let omega = Frequency::from_angular(1.0);
    let omega_p = Frequency::from_angular(2f64.sqrt());
    let t2 = 2f64.sqrt() * PI / omega_p.angular();
    let mut worst = 0f64;
    for k in 0..50 {
        let delta = Frequency::from_angular(20.0 * k as f64 / 49.0);
        let (_, formula) = transfer_populations(&TransferInputs::new(omega, delta).unwrap()).unwrap();
        let numeric = single_atom_p1(omega_p, delta, t2).unwrap();
        worst = worst.max((formula - numeric).abs());
    }
    report(
        "criterion 4 (closed form vs dynamics)",
        worst <= 1e-6,
        &format!("worst |closed form − numeric| over the 50-point grid: {worst:.2e} (limit 1e-6)"),
    );
}

#[test]
fn criterion_5_ideal_protocol() {
    // Full three-pulse protocol in the ideal-blockade limit with Δ_pp = 0 and
    // no decay: fidelity to the target cat state ≥ 1 − 1e-9 for N ∈ {2, 3, 4}.
    let mut details = Vec::new();
    let mut worst = f64::INFINITY;
    for n in [2usize, 3, 4] {
        let fidelity = ideal_protocol_fidelity(n).unwrap();
        worst = worst.min(fidelity);
        details.push(format!("N={n}: 1 − {:.2e}", 1.0 - fidelity));
    }
    report(
        "criterion 5 (ideal-limit protocol)",
        worst >= 1.0 - 1e-9,
        &format!("{} (limit 1 − 1e-9)", details.join(", ")),
    );
}

#[test]
fn criterion_6_decay_accounting() {
    // Non-Hermitian norm loss of the transfer pulse must match N·π/(4Ωτ_p)
    // within 10 % for N ≤ 4 and Ωτ_p ∈ {50, 100}.
    let mut worst = 0f64;
    for atom_count in 1..=4usize {
        for omega_tau in [50.0, 100.0] {
            let loss = transfer_decay_loss(atom_count, omega_tau).unwrap();
            let predicted = atom_count as f64 * PI / (4.0 * omega_tau);
            worst = worst.max((loss - predicted).abs() / predicted);
        }
    }
    report(
        "criterion 6 (decay accounting)",
        worst <= 0.10,
        &format!(
            "worst relative deviation from N·π/(4Ωτ) over N ≤ 4, Ωτ ∈ {{50, 100}}: {worst:.2e} (limit 0.10)"
        ),
    );
}

#[test]
fn criterion_7_far_detuned_blockade() {
    // With a static sp shift equal to Δ₀ and Δ₀/Ω_p ∈ {20, 50}, the blocked
    // population formula sin²(πΔ₀ / (2(Δ₀ + Δ_sp))) must match single-atom
    // numeric evolution within 1e-3 absolute.
    let omega_p = Frequency::from_angular(1.0);
    let mut worst = 0f64;
    let mut details = Vec::new();
    for ratio in [20.0, 50.0] {
        let delta0 = Frequency::from_angular(ratio);
        let shift = delta0;
        let t2 = 2.0 * PI * delta0.angular() / omega_p.angular().powi(2);
        let populations = nonresonant_populations(omega_p, delta0, shift, t2).unwrap();
        let closed_form =
            (PI * delta0.angular() / (2.0 * (delta0.angular() + shift.angular()))).sin().powi(2);
        assert!(
            (populations.p1 - closed_form).abs() < 1e-12,
            "population formula drifted from its closed form at ratio {ratio}"
        );
        let numeric = single_atom_p1(
            omega_p,
            Frequency::from_angular(delta0.angular() + shift.angular()),
            t2,
        )
        .unwrap();
        let diff = (populations.p1 - numeric).abs();
        worst = worst.max(diff);
        details.push(format!("Δ₀/Ω_p={ratio}: {diff:.2e}"));
    }
    report(
        "criterion 7 (far-detuned blockade populations)",
        worst <= 1e-3,
        &format!("|formula − numeric|: {} (limit 1e-3)", details.join(", ")),
    );
}

#[test]
fn criterion_8_invariants() {
    let mut failures: Vec<String> = Vec::new();

    // Norm conservation over a full finite-blockade transfer pulse at the
    // default integration tolerance.
    let lattice = Lattice::build(GeometryKind::Pair, 3.0, None).unwrap();
    let interactions = InteractionSet::with_default_exponents(
        Frequency::from_cyclic(14.4),
        Frequency::from_cyclic(0.019),
        Frequency::from_cyclic(3.7),
    )
    .unwrap();
    let pairs = PairTable::build(&lattice, &interactions).unwrap();
    let spec = HamiltonianSpec::step_two(
        Frequency::from_angular(2f64.sqrt()),
        Frequency::from_angular(2.0),
        pairs,
        BlockadeMode::Finite,
    );
    let op = HamiltonianOp::new(&spec).unwrap();
    let out = evolve(
        &op,
        &StateVector::ground(2),
        PI,
        &EvolveOptions::default(),
    )
    .unwrap();
    let drift = (out.norm_sq() - 1.0).abs();
    if drift > 1e-9 {
        failures.push(format!("norm drift {drift:.2e}"));
    }

    // Hermiticity spot checks on seeded random states.
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut random_state = || {
        let mut amps: Vec<Complex64> = (0..16)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for amp in &mut amps {
            *amp /= norm;
        }
        StateVector::from_amplitudes(2, amps).unwrap()
    };
    let mut hermiticity = 0f64;
    for _ in 0..4 {
        let phi = random_state();
        let psi = random_state();
        let forward = phi.inner(&op.apply(&psi).unwrap()).unwrap();
        let backward = op.apply(&phi).unwrap().inner(&psi).unwrap();
        hermiticity = hermiticity.max((forward - backward).norm());
    }
    if hermiticity > 1e-12 {
        failures.push(format!("hermiticity defect {hermiticity:.2e}"));
    }

    // Config round trip: parse → serialize → parse is a fixed point.
    let config = ScenarioConfig::default_validated();
    let text = serde_json::to_string_pretty(&config).unwrap();
    match ScenarioConfig::from_json(&text) {
        Ok(reparsed) if reparsed == config => {}
        Ok(_) => failures.push("config round trip changed the config".into()),
        Err(err) => failures.push(format!("config round trip failed: {err}")),
    }

    // Coefficient probe invariance within ±0.1 %.
    let base = extract_coefficient_with_probe(GeometryKind::Pair, 6, Mode::Resonant, 1e-3)
        .unwrap()
        .value;
    let tenfold = extract_coefficient_with_probe(GeometryKind::Pair, 6, Mode::Resonant, 1e-2)
        .unwrap()
        .value;
    let probe_dev = (tenfold / base - 1.0).abs();
    if probe_dev > 1e-3 {
        failures.push(format!("probe sensitivity {probe_dev:.2e}"));
    }

    // Cube pair-distance multiset: squared distances in lattice units must be
    // exactly {1 ×12, 2 ×12, 3 ×4}.
    let cube = Lattice::build(GeometryKind::Cube8, 3.0, None).unwrap();
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

    report(
        "criterion 8 (invariant suite)",
        failures.is_empty(),
        &if failures.is_empty() {
            format!(
                "norm drift {drift:.2e}, hermiticity {hermiticity:.2e}, config fixed point, \
                 probe sensitivity {probe_dev:.2e}, cube multiset (12, 12, 4)"
            )
        } else {
            failures.join("; ")
        },
    );
}
