//! State vectors over the per-atom basis (|0⟩, |1⟩, |s⟩, |p⟩).

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Levels per atom; basis index digit values are 0=|0⟩, 1=|1⟩, 2=|s⟩, 3=|p⟩.
pub const LEVELS_PER_ATOM: usize = 4;

/// A normalized complex amplitude vector of length 4^N. Basis index `i` encodes
/// one base-4 digit per atom, atom `k` occupying digit `k` (so the digit is
/// `(i >> (2k)) & 3`).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    atom_count: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// All atoms in |0⟩.
    pub fn ground(atom_count: usize) -> Self {
        let mut amps = vec![Complex64::ZERO; LEVELS_PER_ATOM.pow(atom_count as u32)];
        amps[0] = Complex64::ONE;
        StateVector { atom_count, amps }
    }

    /// Wraps raw amplitudes; the length must equal 4^atom_count.
    pub fn from_amplitudes(atom_count: usize, amps: Vec<Complex64>) -> Result<Self> {
        let expected = LEVELS_PER_ATOM.pow(atom_count as u32);
        if amps.len() != expected {
            return Err(Error::DimensionMismatch {
                found: amps.len(),
                expected,
                atoms: atom_count,
            });
        }
        Ok(StateVector { atom_count, amps })
    }

    /// Number of atoms N.
    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    /// Vector dimension 4^N.
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// The amplitudes in basis order.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Mutable access for in-place construction of test states.
    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// Σ|amplitude|².
    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Rescales to unit norm (no-op on the zero vector).
    pub fn normalize(&mut self) {
        let n = self.norm_sq().sqrt();
        if n > 0.0 {
            for a in &mut self.amps {
                *a /= n;
            }
        }
    }

    /// Level of atom `atom` in basis state `index`.
    pub fn level_of(index: usize, atom: usize) -> usize {
        (index >> (2 * atom)) & 3
    }

    /// Basis index with the given per-atom levels.
    pub fn index_of(levels: &[usize]) -> usize {
        levels
            .iter()
            .enumerate()
            .map(|(atom, &level)| level << (2 * atom))
            .sum()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                found: other.dim(),
                expected: self.dim(),
                atoms: self.atom_count,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// The state with atoms relabeled: new atom `k` holds what `perm[k]` held.
    pub fn permute_atoms(&self, perm: &[usize]) -> Result<StateVector> {
        if perm.len() != self.atom_count {
            return Err(Error::InvalidInput(format!(
                "permutation length {} does not match atom count {}",
                perm.len(),
                self.atom_count
            )));
        }
        let mut seen = vec![false; self.atom_count];
        for &p in perm {
            if p >= self.atom_count || seen[p] {
                return Err(Error::InvalidInput("not a permutation".into()));
            }
            seen[p] = true;
        }
        let mut out = vec![Complex64::ZERO; self.dim()];
        for (index, &amp) in self.amps.iter().enumerate() {
            let mut target = 0usize;
            for (k, &src) in perm.iter().enumerate() {
                target |= StateVector::level_of(index, src) << (2 * k);
            }
            out[target] = amp;
        }
        StateVector::from_amplitudes(self.atom_count, out)
    }
}

/// |⟨a|b⟩|² for equal-dimension states.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}
