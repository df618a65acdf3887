//! Interaction power laws and the per-pair coupling table.

use super::{Frequency, Lattice};
use crate::error::{Error, Result};

const ALLOWED_EXPONENTS: [i32; 3] = [0, 3, 6];

/// Reference coupling strengths at the nearest-neighbor spacing `d`, with their
/// distance exponents: `Δ(R) = Δ(d)·(d/R)^γ`. Exponent 3 models the resonant
/// dipole-dipole law, 6 the van der Waals law, and 0 a distance-independent
/// coupling used for cross-checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionSet {
    pub delta_sp_at_d: Frequency,
    pub delta_pp_at_d: Frequency,
    pub delta_ss_at_d: Frequency,
    pub gamma_sp: i32,
    pub gamma_pp: i32,
    pub gamma_ss: i32,
}

impl InteractionSet {
    /// Builds a validated set; strengths must be ≥ 0 and exponents in {0, 3, 6}.
    pub fn new(
        delta_sp_at_d: Frequency,
        delta_pp_at_d: Frequency,
        delta_ss_at_d: Frequency,
        gamma_sp: i32,
        gamma_pp: i32,
        gamma_ss: i32,
    ) -> Result<Self> {
        for gamma in [gamma_sp, gamma_pp, gamma_ss] {
            if !ALLOWED_EXPONENTS.contains(&gamma) {
                return Err(Error::BadExponent(gamma));
            }
        }
        for (name, f) in [
            ("delta_sp_at_d", delta_sp_at_d),
            ("delta_pp_at_d", delta_pp_at_d),
            ("delta_ss_at_d", delta_ss_at_d),
        ] {
            if !(f.cyclic() >= 0.0) || !f.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "interaction strength {name} must be finite and >= 0, got {f}"
                )));
            }
        }
        Ok(InteractionSet {
            delta_sp_at_d,
            delta_pp_at_d,
            delta_ss_at_d,
            gamma_sp,
            gamma_pp,
            gamma_ss,
        })
    }

    /// The default exponents (3 for s-p, 6 for p-p and s-s) with given strengths.
    pub fn with_default_exponents(
        delta_sp_at_d: Frequency,
        delta_pp_at_d: Frequency,
        delta_ss_at_d: Frequency,
    ) -> Result<Self> {
        InteractionSet::new(delta_sp_at_d, delta_pp_at_d, delta_ss_at_d, 3, 6, 6)
    }

    /// Same set with the p-p strength replaced (used for idealized references).
    pub fn with_delta_pp(mut self, delta_pp_at_d: Frequency) -> Self {
        self.delta_pp_at_d = delta_pp_at_d;
        self
    }
}

/// Applies the power law: `reference × (1/R_over_d)^exponent`. Distances below
/// the nearest-neighbor spacing are rejected.
pub fn coupling_at(reference: Frequency, exponent: i32, r_over_d: f64) -> Result<Frequency> {
    if !ALLOWED_EXPONENTS.contains(&exponent) {
        return Err(Error::BadExponent(exponent));
    }
    if !(r_over_d >= 1.0 - 1e-12) {
        return Err(Error::PairTooClose(r_over_d));
    }
    Ok(Frequency::from_cyclic(
        reference.cyclic() / r_over_d.powi(exponent),
    ))
}

/// Principal-quantum-number scaling helper: `reference × (n/n_ref)^exponent`.
pub fn n_scaling(reference_value: f64, n_ref: u32, n: u32, exponent: f64) -> Result<f64> {
    if n_ref == 0 || n == 0 {
        return Err(Error::InvalidInput(
            "principal quantum numbers must be >= 1".into(),
        ));
    }
    Ok(reference_value * (n as f64 / n_ref as f64).powf(exponent))
}

/// One unordered atom pair with its separation and couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairEntry {
    pub i: usize,
    pub j: usize,
    pub r_over_d: f64,
    pub delta_sp: Frequency,
    pub delta_pp: Frequency,
    pub delta_ss: Frequency,
}

/// All unordered pairs of a lattice with their power-law couplings.
#[derive(Debug, Clone, PartialEq)]
pub struct PairTable {
    atom_count: usize,
    entries: Vec<PairEntry>,
}

impl PairTable {
    /// Evaluates the power laws for every unordered pair of the lattice.
    pub fn build(lattice: &Lattice, interactions: &InteractionSet) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, j, r) in lattice.pairs() {
            entries.push(PairEntry {
                i,
                j,
                r_over_d: r,
                delta_sp: coupling_at(interactions.delta_sp_at_d, interactions.gamma_sp, r)?,
                delta_pp: coupling_at(interactions.delta_pp_at_d, interactions.gamma_pp, r)?,
                delta_ss: coupling_at(interactions.delta_ss_at_d, interactions.gamma_ss, r)?,
            });
        }
        Ok(PairTable {
            atom_count: lattice.atom_count(),
            entries,
        })
    }

    /// Number of atoms the table refers to.
    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    /// The pair entries, ordered by (i, j).
    pub fn entries(&self) -> &[PairEntry] {
        &self.entries
    }
}
