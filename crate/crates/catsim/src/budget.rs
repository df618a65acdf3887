//! Analytic error budgets: the closed-form transfer populations, the
//! three-term error budget (spontaneous emission, imperfect blockade,
//! p-p transfer error), drive-frequency optimization, and the two-atom
//! gate scaling law.

use crate::error::{Error, Result};
use crate::model::{Frequency, Mode};
use serde::Serialize;
use std::f64::consts::PI;

/// Inputs to the closed-form transfer-population formula: the effective
/// Rabi frequency Ω = Ω_p/√2 and an interaction-induced detuning Δ of the
/// intermediate level.
#[derive(Debug, Clone, Copy)]
pub struct TransferInputs {
    pub omega: Frequency,
    pub delta: Frequency,
}

impl TransferInputs {
    pub fn new(omega: Frequency, delta: Frequency) -> Result<Self> {
        if !(omega.angular() > 0.0) || !omega.angular().is_finite() {
            return Err(Error::InvalidInput("omega must be positive".into()));
        }
        if !delta.angular().is_finite() {
            return Err(Error::InvalidInput("delta must be finite".into()));
        }
        Ok(TransferInputs { omega, delta })
    }

    /// Ω′ = √(4Ω² + Δ²) in rad/μs.
    pub fn omega_prime(&self) -> f64 {
        let w = self.omega.angular();
        let d = self.delta.angular();
        (4.0 * w * w + d * d).sqrt()
    }
}

fn clamp_population(p: f64) -> Result<f64> {
    if !p.is_finite() {
        return Err(Error::NonFinite("transfer population".into()));
    }
    if !(-1e-12..=1.0 + 1e-12).contains(&p) {
        return Err(Error::PopulationOutOfRange(p));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Populations (P0, P1) of |0⟩ and |1⟩ after the transfer pulse, in closed
/// form. With Δ = 0 the formula collapses to full transfer, P1 = 1.
pub fn transfer_populations(inputs: &TransferInputs) -> Result<(f64, f64)> {
    let w = inputs.omega.angular();
    let d = inputs.delta.angular();
    let wp = inputs.omega_prime();
    let wp2 = wp * wp;
    let w2 = w * w;
    let p1 = (wp2 - w2 + w2 * (PI * wp / w).cos()
        - wp2 * (PI * d / (2.0 * w)).cos() * (PI * wp / (2.0 * w)).cos()
        - d * wp * (PI * d / (2.0 * w)).sin() * (PI * wp / (2.0 * w)).sin())
        / (2.0 * wp2);
    let p1 = clamp_population(p1)?;
    Ok((1.0 - p1, p1))
}

/// Transfer populations in the far-detuned regime, where the two-photon drive
/// reduces to a Rabi oscillation at Ω = Ω_p²/(2(Δ₀ + shift)).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NonresonantPopulations {
    pub p0: f64,
    pub p1: f64,
    /// Set when Δ₀ < 10 Ω_p, outside the formula's validity regime.
    pub regime_warning: bool,
}

/// Far-detuned transfer populations after time `t_us`, with an optional extra
/// shift of the intermediate level (e.g. the s-p blockade shift).
pub fn nonresonant_populations(
    omega_p: Frequency,
    delta0: Frequency,
    delta_sp_shift: Frequency,
    t_us: f64,
) -> Result<NonresonantPopulations> {
    let wp = omega_p.angular();
    let d0 = delta0.angular();
    let shift = delta_sp_shift.angular();
    if !(wp > 0.0) || !(d0 > 0.0) {
        return Err(Error::InvalidInput(
            "omega_p and delta0 must be positive".into(),
        ));
    }
    if !(t_us >= 0.0) || !t_us.is_finite() {
        return Err(Error::InvalidInput("t must be nonnegative and finite".into()));
    }
    if d0 + shift == 0.0 {
        return Err(Error::InvalidInput("delta0 + shift must be nonzero".into()));
    }
    let omega_eff = wp * wp / (2.0 * (d0 + shift));
    let half_angle = 0.5 * omega_eff * t_us;
    let p1 = clamp_population(half_angle.sin().powi(2))?;
    Ok(NonresonantPopulations {
        p0: 1.0 - p1,
        p1,
        regime_warning: d0 < 10.0 * wp,
    })
}

/// Inputs to the three-term error budget.
#[derive(Debug, Clone, Copy)]
pub struct BudgetInputs {
    pub atom_count: usize,
    pub mode: Mode,
    /// The optimizable drive frequency: Ω (resonant) or Δ₀ (nonresonant).
    pub drive: Frequency,
    pub tau_p_us: f64,
    pub delta_sp_at_d: Frequency,
    pub delta_pp_at_d: Frequency,
    /// Geometric blockade factor ⟨(R/d)^{2γ_sp}⟩ of the lattice.
    pub blockade_pair_factor: f64,
    /// Transfer-error coefficient α_N (resonant) or β_N (nonresonant).
    pub coefficient: f64,
}

impl BudgetInputs {
    /// The same budget evaluated at a different drive frequency.
    pub fn with_drive(&self, drive: Frequency) -> BudgetInputs {
        BudgetInputs { drive, ..*self }
    }

    fn validate(&self) -> Result<()> {
        if self.atom_count == 0 {
            return Err(Error::TooFewAtoms {
                needed: 1,
                found: 0,
            });
        }
        if !(self.drive.angular() > 0.0) {
            return Err(Error::InvalidInput("drive frequency must be positive".into()));
        }
        if !(self.tau_p_us > 0.0) {
            return Err(Error::InvalidInput("tau_p must be positive".into()));
        }
        if !(self.delta_sp_at_d.angular() > 0.0) {
            return Err(Error::InvalidInput("delta_sp must be positive".into()));
        }
        if self.delta_pp_at_d.angular() < 0.0 {
            return Err(Error::InvalidInput("delta_pp must be nonnegative".into()));
        }
        if !(self.blockade_pair_factor >= 1.0 - 1e-12) {
            return Err(Error::InvalidInput(
                "blockade pair factor must be at least 1".into(),
            ));
        }
        if !(self.coefficient >= 0.0) {
            return Err(Error::InvalidInput("coefficient must be nonnegative".into()));
        }
        for value in [
            self.drive.angular(),
            self.tau_p_us,
            self.delta_sp_at_d.angular(),
            self.delta_pp_at_d.angular(),
            self.blockade_pair_factor,
            self.coefficient,
        ] {
            if !value.is_finite() {
                return Err(Error::NonFinite("budget input".into()));
            }
        }
        Ok(())
    }
}

/// The three error contributions and their sum.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ErrorBudget {
    /// Spontaneous emission from the intermediate level.
    pub e_se: f64,
    /// Imperfect blockade of double excitation.
    pub e_bl: f64,
    /// Transfer error from p-p interaction shifts.
    pub e_tr: f64,
    pub total: f64,
}

/// Evaluates the three-term budget.
///
/// Resonant: e_se = Nπ/(4Ωτ_p), e_bl = N(π²/4)(Ω/Δ_sp(d))²⟨(R/d)^{2γ}⟩,
/// e_tr = α_N(Δ_pp(d)/Ω)². Nonresonant: e_se = Nπ/(2Δ₀τ_p),
/// e_bl = N(π²/4)(Δ₀/Δ_sp(d))²⟨(R/d)^{2γ}⟩, e_tr = β_N(Δ_pp(d)/Δ₀)².
pub fn error_budget(inputs: &BudgetInputs) -> Result<ErrorBudget> {
    inputs.validate()?;
    let n = inputs.atom_count as f64;
    let drive = inputs.drive.angular();
    let ratio_bl = inputs.drive.cyclic() / inputs.delta_sp_at_d.cyclic();
    let ratio_tr = inputs.delta_pp_at_d.cyclic() / inputs.drive.cyclic();
    let e_se = match inputs.mode {
        Mode::Resonant => n * PI / (4.0 * drive * inputs.tau_p_us),
        Mode::Nonresonant => n * PI / (2.0 * drive * inputs.tau_p_us),
    };
    let e_bl = n * (PI * PI / 4.0) * ratio_bl * ratio_bl * inputs.blockade_pair_factor;
    let e_tr = inputs.coefficient * ratio_tr * ratio_tr;
    let budget = ErrorBudget {
        e_se,
        e_bl,
        e_tr,
        total: e_se + e_bl + e_tr,
    };
    if !budget.total.is_finite() {
        return Err(Error::NonFinite("error budget total".into()));
    }
    Ok(budget)
}

/// Result of the drive-frequency optimization.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RabiOptimum {
    /// Optimal drive frequency (cyclic MHz).
    pub omega_star: Frequency,
    /// Budget total at the optimum.
    pub e_min: f64,
}

/// Minimizes the budget total over the drive frequency by golden-section
/// search on log Ω within `[lo_mhz, hi_mhz]`, to a relative tolerance of
/// 1e-4 on Ω. A minimum sitting on either boundary is reported as an error.
pub fn optimize_rabi(inputs: &BudgetInputs, lo_mhz: f64, hi_mhz: f64) -> Result<RabiOptimum> {
    if !(lo_mhz > 0.0) || !(hi_mhz > lo_mhz) || !lo_mhz.is_finite() || !hi_mhz.is_finite() {
        return Err(Error::InvalidInput(format!(
            "bounds [{lo_mhz}, {hi_mhz}] MHz must be positive, finite, and ordered"
        )));
    }
    let objective = |x: f64| -> Result<f64> {
        let drive = Frequency::from_cyclic(x.exp());
        Ok(error_budget(&inputs.with_drive(drive))?.total)
    };
    let rel_tol = 1e-4;
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo_mhz.ln(), hi_mhz.ln());
    let mut c = b - golden * (b - a);
    let mut d = a + golden * (b - a);
    let mut fc = objective(c)?;
    let mut fd = objective(d)?;
    while b - a > rel_tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - golden * (b - a);
            fc = objective(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + golden * (b - a);
            fd = objective(d)?;
        }
    }
    let x_star = 0.5 * (a + b);
    let e_min = objective(x_star)?;
    // Reject optima pinned to a boundary: the bracket never saw an interior
    // minimum there.
    let margin = 10.0 * rel_tol;
    if x_star - lo_mhz.ln() < margin || hi_mhz.ln() - x_star < margin {
        return Err(Error::NoInteriorMinimum(lo_mhz, hi_mhz));
    }
    Ok(RabiOptimum {
        omega_star: Frequency::from_cyclic(x_star.exp()),
        e_min,
    })
}

/// One row of a drive-frequency sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow {
    pub omega_mhz: f64,
    pub e_se: f64,
    pub e_bl: f64,
    pub e_tr: f64,
    pub e_total: f64,
}

/// Evaluates the budget on a log-spaced drive-frequency grid.
pub fn sweep(
    inputs: &BudgetInputs,
    lo_mhz: f64,
    hi_mhz: f64,
    points: usize,
) -> Result<Vec<SweepRow>> {
    if points < 2 {
        return Err(Error::InvalidInput(format!(
            "a sweep needs at least 2 points, got {points}"
        )));
    }
    if !(lo_mhz > 0.0) || !(hi_mhz > lo_mhz) {
        return Err(Error::InvalidInput(format!(
            "sweep bounds [{lo_mhz}, {hi_mhz}] MHz must be positive and ordered"
        )));
    }
    let log_step = (hi_mhz / lo_mhz).ln() / (points - 1) as f64;
    let mut rows = Vec::with_capacity(points);
    for k in 0..points {
        let omega_mhz = lo_mhz * (k as f64 * log_step).exp();
        let budget = error_budget(&inputs.with_drive(Frequency::from_cyclic(omega_mhz)))?;
        rows.push(SweepRow {
            omega_mhz,
            e_se: budget.e_se,
            e_bl: budget.e_bl,
            e_tr: budget.e_tr,
            e_total: budget.total,
        });
    }
    Ok(rows)
}

/// Index of a strict interior minimum of `e_total` in `rows`, if one exists.
pub fn interior_minimum(rows: &[SweepRow]) -> Option<usize> {
    let best = rows
        .iter()
        .enumerate()
        .min_by(|(_, x), (_, y)| x.e_total.total_cmp(&y.e_total))?
        .0;
    (best > 0 && best + 1 < rows.len()).then_some(best)
}

/// Closed-form optimum of the two-term, two-atom gate budget
/// e(Ω) = c_bl·Ω²/Δ² + c_se/(Ωτ): the minimizer Ω* = (c_se·Δ²/(2c_bl·τ))^{1/3}
/// and the budget evaluated there, which scales as (Δτ)^{-2/3}.
pub fn two_atom_gate_optimum(
    delta: Frequency,
    tau_us: f64,
    c_bl: f64,
    c_se: f64,
) -> Result<(Frequency, f64)> {
    let d = delta.angular();
    if !(d > 0.0) || !(tau_us > 0.0) || !(c_bl > 0.0) || !(c_se > 0.0) {
        return Err(Error::InvalidInput(
            "two-atom gate inputs must all be positive".into(),
        ));
    }
    let omega_star = (c_se * d * d / (2.0 * c_bl * tau_us)).powf(1.0 / 3.0);
    let e_min = c_bl * omega_star * omega_star / (d * d) + c_se / (omega_star * tau_us);
    Ok((Frequency::from_angular(omega_star), e_min))
}
