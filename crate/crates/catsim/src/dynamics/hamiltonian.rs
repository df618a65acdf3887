//! Sparse Hamiltonian action for the two pulse types, with interaction shifts,
//! blockade handling, and optional spontaneous-emission decay.

use super::state::StateVector;
use crate::error::{Error, Result};
use crate::model::{Frequency, PairTable};
use num_complex::Complex64;

/// Which pulse the Hamiltonian describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// Excitation pulse coupling |0⟩ ↔ |s⟩ with matrix element Ω_s/2.
    One,
    /// Transfer pulse coupling |0⟩ ↔ |p⟩ and |1⟩ ↔ |p⟩ with elements Ω_p0/2 and
    /// Ω_p1/2 and a common detuning Δ₀ on |p⟩.
    Two,
}

/// How inter-atom constraints are imposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockadeMode {
    /// Exact blockade: basis states with two atoms in |s⟩, or with |s⟩ and |p⟩
    /// excitations coexisting, are projected out. The p-p shifts stay active.
    Ideal,
    /// Full 4^N space with all pair shifts (s-s, s-p, p-p) as diagonal energies.
    Finite,
}

/// Spontaneous-emission model: a non-Hermitian diagonal −i/(2τ) per occupation
/// of the decaying level. Norm loss accumulates as total scattering probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecaySpec {
    /// Lifetime of |p⟩ in μs.
    pub tau_p_us: f64,
    /// Lifetime of |s⟩ in μs; `None` treats |s⟩ as non-decaying.
    pub tau_s_us: Option<f64>,
}

/// Everything needed to materialize the action of one pulse Hamiltonian.
#[derive(Debug, Clone)]
pub struct HamiltonianSpec {
    pub step: Step,
    pub omega_s: Frequency,
    pub omega_p0: Frequency,
    pub omega_p1: Frequency,
    /// Detuning of |p⟩ (applies whenever nonzero, typically only in step two).
    pub detuning_delta0: Frequency,
    pub pair_table: PairTable,
    pub blockade_mode: BlockadeMode,
    pub decay: Option<DecaySpec>,
    /// +1 for the forward pulses, −1 for the reversed pulse (flips the drive
    /// term only; interactions and decay are unaffected).
    pub drive_sign: f64,
}

impl HamiltonianSpec {
    /// A step-one (excitation) spec with no decay and unit drive sign.
    pub fn step_one(omega_s: Frequency, pair_table: PairTable, blockade_mode: BlockadeMode) -> Self {
        HamiltonianSpec {
            step: Step::One,
            omega_s,
            omega_p0: Frequency::ZERO,
            omega_p1: Frequency::ZERO,
            detuning_delta0: Frequency::ZERO,
            pair_table,
            blockade_mode,
            decay: None,
            drive_sign: 1.0,
        }
    }

    /// A step-two (transfer) spec with symmetric legs, no decay, unit sign.
    pub fn step_two(
        omega_p: Frequency,
        detuning_delta0: Frequency,
        pair_table: PairTable,
        blockade_mode: BlockadeMode,
    ) -> Self {
        HamiltonianSpec {
            step: Step::Two,
            omega_s: Frequency::ZERO,
            omega_p0: omega_p,
            omega_p1: omega_p,
            detuning_delta0,
            pair_table,
            blockade_mode,
            decay: None,
            drive_sign: 1.0,
        }
    }
}

/// The materialized operator: a precomputed (complex) diagonal, the blockade
/// mask, and the per-atom drive couplings. Never a dense 4^N × 4^N matrix.
#[derive(Debug, Clone)]
pub struct HamiltonianOp {
    atom_count: usize,
    dim: usize,
    step: Step,
    drive_sign: f64,
    omega_s_half: f64,
    omega_p0_half: f64,
    omega_p1_half: f64,
    diag: Vec<Complex64>,
    allowed: Option<Vec<bool>>,
}

impl HamiltonianOp {
    /// Precomputes the diagonal (detuning + pair shifts + decay) and the mask.
    pub fn new(spec: &HamiltonianSpec) -> Result<Self> {
        let atom_count = spec.pair_table.atom_count();
        if atom_count == 0 {
            return Err(Error::TooFewAtoms {
                needed: 1,
                found: 0,
            });
        }
        if atom_count > 10 {
            return Err(Error::AtomCountOverCap(atom_count, 10));
        }
        if let Some(decay) = &spec.decay {
            if !(decay.tau_p_us > 0.0) || decay.tau_s_us.is_some_and(|t| !(t > 0.0)) {
                return Err(Error::InvalidInput(
                    "decay lifetimes must be positive".into(),
                ));
            }
        }
        let dim = 4usize.pow(atom_count as u32);

        let allowed = match spec.blockade_mode {
            BlockadeMode::Finite => None,
            BlockadeMode::Ideal => {
                let mut mask = vec![false; dim];
                for (index, slot) in mask.iter_mut().enumerate() {
                    let mut s_count = 0usize;
                    let mut p_count = 0usize;
                    for atom in 0..atom_count {
                        match StateVector::level_of(index, atom) {
                            2 => s_count += 1,
                            3 => p_count += 1,
                            _ => {}
                        }
                    }
                    *slot = s_count <= 1 && !(s_count >= 1 && p_count >= 1);
                }
                Some(mask)
            }
        };

        let delta0 = spec.detuning_delta0.angular();
        let mut diag = vec![Complex64::ZERO; dim];
        for (index, value) in diag.iter_mut().enumerate() {
            if let Some(mask) = &allowed {
                if !mask[index] {
                    continue;
                }
            }
            let mut real = 0.0;
            let mut imag = 0.0;
            for atom in 0..atom_count {
                match StateVector::level_of(index, atom) {
                    2 => {
                        if let Some(decay) = &spec.decay {
                            if let Some(tau_s) = decay.tau_s_us {
                                imag -= 0.5 / tau_s;
                            }
                        }
                    }
                    3 => {
                        real += delta0;
                        if let Some(decay) = &spec.decay {
                            imag -= 0.5 / decay.tau_p_us;
                        }
                    }
                    _ => {}
                }
            }
            for entry in spec.pair_table.entries() {
                let li = StateVector::level_of(index, entry.i);
                let lj = StateVector::level_of(index, entry.j);
                real += match (li, lj) {
                    (3, 3) => entry.delta_pp.angular(),
                    (2, 3) | (3, 2) => entry.delta_sp.angular(),
                    (2, 2) => entry.delta_ss.angular(),
                    _ => 0.0,
                };
            }
            *value = Complex64::new(real, imag);
        }

        Ok(HamiltonianOp {
            atom_count,
            dim,
            step: spec.step,
            drive_sign: spec.drive_sign,
            omega_s_half: 0.5 * spec.omega_s.angular(),
            omega_p0_half: 0.5 * spec.omega_p0.angular(),
            omega_p1_half: 0.5 * spec.omega_p1.angular(),
            diag,
            allowed,
        })
    }

    /// Vector dimension 4^N.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of atoms.
    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    /// A magnitude scale of H (rad/μs) used to seed the integrator step size.
    pub fn frequency_scale(&self) -> f64 {
        let drive = self.atom_count as f64
            * (self.omega_s_half.abs() + self.omega_p0_half.abs() + self.omega_p1_half.abs());
        let diag = self
            .diag
            .iter()
            .map(|d| d.norm())
            .fold(0.0f64, f64::max);
        (drive + diag).max(1e-6)
    }

    /// True when the operator is Hermitian (no decay diagonal).
    pub fn is_hermitian(&self) -> bool {
        self.diag.iter().all(|d| d.im == 0.0)
    }

    /// H|ψ⟩ into a caller-provided buffer (the hot path of the integrator).
    pub fn apply_into(&self, amps: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(amps.len(), self.dim);
        debug_assert_eq!(out.len(), self.dim);
        for (o, (a, d)) in out.iter_mut().zip(amps.iter().zip(&self.diag)) {
            *o = a * d;
        }
        // Drive terms: visit each coupled unordered basis pair once from its
        // lower level side and scatter both directions.
        let couple = |out: &mut [Complex64], lo: usize, hi: usize, element: f64| {
            out[hi] += element * amps[lo];
            out[lo] += element * amps[hi];
        };
        for index in 0..self.dim {
            if let Some(mask) = &self.allowed {
                if !mask[index] {
                    continue;
                }
            }
            for atom in 0..self.atom_count {
                let level = StateVector::level_of(index, atom);
                match self.step {
                    Step::One => {
                        if level == 0 {
                            let partner = index + (2 << (2 * atom));
                            if self.allowed.as_ref().is_some_and(|m| !m[partner]) {
                                continue;
                            }
                            couple(out, index, partner, self.drive_sign * self.omega_s_half);
                        }
                    }
                    Step::Two => {
                        if level == 0 || level == 1 {
                            let partner = index + ((3 - level) << (2 * atom));
                            if self.allowed.as_ref().is_some_and(|m| !m[partner]) {
                                continue;
                            }
                            let element = if level == 0 {
                                self.omega_p0_half
                            } else {
                                self.omega_p1_half
                            };
                            couple(out, index, partner, self.drive_sign * element);
                        }
                    }
                }
            }
        }
    }

    /// H|ψ⟩ as a new state (not normalized — it is an operator image).
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                found: state.dim(),
                expected: self.dim,
                atoms: self.atom_count,
            });
        }
        let mut out = vec![Complex64::ZERO; self.dim];
        self.apply_into(state.amplitudes(), &mut out);
        StateVector::from_amplitudes(self.atom_count, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GeometryKind, InteractionSet, Lattice};

    fn mhz(x: f64) -> Frequency {
        Frequency::from_cyclic(x)
    }

    fn table(kind: GeometryKind, sp: f64, pp: f64, ss: f64) -> PairTable {
        let lattice = Lattice::build(kind, 3.0, None).unwrap();
        let set = InteractionSet::with_default_exponents(mhz(sp), mhz(pp), mhz(ss)).unwrap();
        PairTable::build(&lattice, &set).unwrap()
    }

    #[test]
    fn zero_couplings_give_zero_output() {
        let spec = HamiltonianSpec::step_two(
            Frequency::ZERO,
            Frequency::ZERO,
            table(GeometryKind::Pair, 0.0, 0.0, 0.0),
            BlockadeMode::Finite,
        );
        let op = HamiltonianOp::new(&spec).unwrap();
        let mut psi = StateVector::ground(2);
        psi.amplitudes_mut()[7] = Complex64::new(0.3, -0.4);
        let out = op.apply(&psi).unwrap();
        assert!(out.amplitudes().iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn double_p_state_picks_up_pair_shift() {
        let spec = HamiltonianSpec::step_two(
            Frequency::ZERO,
            Frequency::ZERO,
            table(GeometryKind::Pair, 0.0, 0.019, 0.0),
            BlockadeMode::Finite,
        );
        let op = HamiltonianOp::new(&spec).unwrap();
        let mut psi = StateVector::ground(2);
        psi.amplitudes_mut()[0] = Complex64::ZERO;
        let pp_index = StateVector::index_of(&[3, 3]);
        psi.amplitudes_mut()[pp_index] = Complex64::ONE;
        let out = op.apply(&psi).unwrap();
        let expected = mhz(0.019).angular();
        assert!((out.amplitudes()[pp_index].re - expected).abs() < 1e-14);
        assert!(out
            .amplitudes()
            .iter()
            .enumerate()
            .all(|(i, a)| i == pp_index || a.norm() < 1e-14));
    }

    #[test]
    fn single_atom_drive_element_convention() {
        let lattice = Lattice::build(GeometryKind::Pair, 3.0, None)
            .unwrap()
            .truncate(1)
            .unwrap();
        let set =
            InteractionSet::with_default_exponents(mhz(0.0), mhz(0.0), mhz(0.0)).unwrap();
        let pair_table = PairTable::build(&lattice, &set).unwrap();
        let spec = HamiltonianSpec::step_two(
            mhz(1.0),
            Frequency::ZERO,
            pair_table,
            BlockadeMode::Finite,
        );
        let op = HamiltonianOp::new(&spec).unwrap();
        let psi = StateVector::ground(1);
        let out = op.apply(&psi).unwrap();
        // ⟨p|H|0⟩ = Ω_p/2 and nothing else from |0⟩
        let expected = 0.5 * mhz(1.0).angular();
        assert!((out.amplitudes()[3].re - expected).abs() < 1e-14);
        assert!(out.amplitudes()[0].norm() < 1e-14);
        assert!(out.amplitudes()[1].norm() < 1e-14);
        assert!(out.amplitudes()[2].norm() < 1e-14);
    }

    #[test]
    fn ideal_mask_excludes_double_s_and_sp_mixtures() {
        let spec = HamiltonianSpec::step_one(
            mhz(0.5),
            table(GeometryKind::Pair, 14.4, 0.019, 3.7),
            BlockadeMode::Ideal,
        );
        let op = HamiltonianOp::new(&spec).unwrap();
        let mut psi = StateVector::ground(2);
        psi.amplitudes_mut()[0] = Complex64::ZERO;
        let ss = StateVector::index_of(&[2, 2]);
        let sp = StateVector::index_of(&[2, 3]);
        psi.amplitudes_mut()[ss] = Complex64::new(0.6, 0.0);
        psi.amplitudes_mut()[sp] = Complex64::new(0.8, 0.0);
        let out = op.apply(&psi).unwrap();
        assert!(out.amplitudes().iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn hermiticity_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let spec = HamiltonianSpec {
            step: Step::Two,
            omega_s: mhz(0.2),
            omega_p0: mhz(0.7),
            omega_p1: mhz(0.4),
            detuning_delta0: mhz(1.3),
            pair_table: table(GeometryKind::Square4, 14.4, 0.019, 3.7),
            blockade_mode: BlockadeMode::Finite,
            decay: None,
            drive_sign: 1.0,
        };
        let op = HamiltonianOp::new(&spec).unwrap();
        for _ in 0..4 {
            let random_state = |rng: &mut rand_chacha::ChaCha8Rng| {
                let amps = (0..op.dim())
                    .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                    .collect();
                let mut s = StateVector::from_amplitudes(4, amps).unwrap();
                s.normalize();
                s
            };
            let phi = random_state(&mut rng);
            let psi = random_state(&mut rng);
            let a = phi.inner(&op.apply(&psi).unwrap()).unwrap();
            let b = psi.inner(&op.apply(&phi).unwrap()).unwrap();
            assert!((a - b.conj()).norm() <= 1e-12 * a.norm().max(1.0));
        }
    }

    #[test]
    fn decay_adds_negative_imaginary_diagonal() {
        let mut spec = HamiltonianSpec::step_two(
            Frequency::ZERO,
            Frequency::ZERO,
            table(GeometryKind::Pair, 0.0, 0.0, 0.0),
            BlockadeMode::Finite,
        );
        spec.decay = Some(DecaySpec {
            tau_p_us: 10.0,
            tau_s_us: Some(20.0),
        });
        let op = HamiltonianOp::new(&spec).unwrap();
        assert!(!op.is_hermitian());
        let mut psi = StateVector::ground(2);
        psi.amplitudes_mut()[0] = Complex64::ZERO;
        let sp = StateVector::index_of(&[2, 3]);
        psi.amplitudes_mut()[sp] = Complex64::ONE;
        let out = op.apply(&psi).unwrap();
        let expected = -0.5 / 10.0 - 0.5 / 20.0;
        assert!((out.amplitudes()[sp].im - expected).abs() < 1e-15);
    }
}
