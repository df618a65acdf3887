//! Adaptive time propagation of the Schrödinger equation dψ/dt = −iHψ.
//!
//! The stepper is an embedded Dormand–Prince 5(4) pair with the first-same-as-last
//! property; the step size is controlled against a per-step local error tolerance.

use super::hamiltonian::HamiltonianOp;
use super::state::StateVector;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Integration controls.
#[derive(Debug, Clone, Copy)]
pub struct EvolveOptions {
    /// Local error bound per accepted step (L2 norm of the embedded difference).
    pub tolerance: f64,
    /// Cap on step attempts before the integrator reports failure.
    pub max_steps: u64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            tolerance: 1e-10,
            max_steps: 5_000_000,
        }
    }
}

// Dormand–Prince 5(4) tableau.
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
/// Fifth-order weights (also the last stage row — FSAL).
const B5: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
/// Difference between the 5th- and embedded 4th-order weights.
const ERR: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Propagates `state` for `duration_us` under the (possibly non-Hermitian)
/// Hamiltonian, keeping the local error of every accepted step at or below
/// `opts.tolerance`. Reports failure instead of silently degrading.
pub fn evolve(
    op: &HamiltonianOp,
    state: &StateVector,
    duration_us: f64,
    opts: &EvolveOptions,
) -> Result<StateVector> {
    if !(duration_us >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "evolution duration must be >= 0, got {duration_us}"
        )));
    }
    if !(opts.tolerance > 0.0) {
        return Err(Error::InvalidInput(format!(
            "integrator tolerance must be positive, got {}",
            opts.tolerance
        )));
    }
    if state.dim() != op.dim() {
        return Err(Error::DimensionMismatch {
            found: state.dim(),
            expected: op.dim(),
            atoms: op.atom_count(),
        });
    }
    if duration_us == 0.0 {
        return Ok(state.clone());
    }

    let dim = op.dim();
    let atom_count = state.atom_count();
    // dy/dt = −i H y
    let rhs = |op: &HamiltonianOp, y: &[Complex64], out: &mut [Complex64]| {
        op.apply_into(y, out);
        for v in out.iter_mut() {
            *v = Complex64::new(v.im, -v.re);
        }
    };

    let mut y = state.amplitudes().to_vec();
    let mut k: Vec<Vec<Complex64>> = (0..7).map(|_| vec![Complex64::ZERO; dim]).collect();
    let mut stage = vec![Complex64::ZERO; dim];
    let mut y_next = vec![Complex64::ZERO; dim];

    let mut t = 0.0f64;
    let mut h = (0.5 / op.frequency_scale()).min(duration_us);
    let h_min = duration_us * 1e-14;
    let mut attempts: u64 = 0;
    let mut fsal_ready = false;

    while t < duration_us {
        h = h.min(duration_us - t);
        if h < h_min {
            return Err(Error::IntegratorFailure {
                tolerance: opts.tolerance,
                max_steps: opts.max_steps,
                t_reached: t,
                t_end: duration_us,
            });
        }
        attempts += 1;
        if attempts > opts.max_steps {
            return Err(Error::IntegratorFailure {
                tolerance: opts.tolerance,
                max_steps: opts.max_steps,
                t_reached: t,
                t_end: duration_us,
            });
        }

        if !fsal_ready {
            rhs(op, &y, &mut k[0]);
            fsal_ready = true;
        }

        // Stages 2..6.
        let rows: [&[f64]; 5] = [&A2, &A3, &A4, &A5, &A6];
        for (s, row) in rows.iter().enumerate() {
            for (idx, sv) in stage.iter_mut().enumerate() {
                let mut acc = Complex64::ZERO;
                for (j, &a) in row.iter().enumerate() {
                    if a != 0.0 {
                        acc += a * k[j][idx];
                    }
                }
                *sv = y[idx] + h * acc;
            }
            let ks = &mut k[s + 1];
            rhs(op, &stage, ks);
        }

        // Fifth-order solution, then the FSAL stage k7 = f(y_next).
        for (idx, yv) in y_next.iter_mut().enumerate() {
            let mut acc = Complex64::ZERO;
            for (j, &b) in B5.iter().enumerate() {
                if b != 0.0 {
                    acc += b * k[j][idx];
                }
            }
            *yv = y[idx] + h * acc;
        }
        {
            let k7 = &mut k[6];
            rhs(op, &y_next, k7);
        }

        // Embedded error estimate.
        let mut err_sq = 0.0f64;
        #[allow(clippy::needless_range_loop)] // idx spans the seven parallel stage buffers
        for idx in 0..dim {
            let mut acc = Complex64::ZERO;
            for (j, &d) in ERR.iter().enumerate() {
                if d != 0.0 {
                    acc += d * k[j][idx];
                }
            }
            err_sq += (h * acc).norm_sqr();
        }
        let err = err_sq.sqrt();

        if err <= opts.tolerance {
            t += h;
            std::mem::swap(&mut y, &mut y_next);
            k.swap(0, 6); // first-same-as-last
        } else {
            fsal_ready = true; // k1 still matches y (step rejected)
        }

        let factor = if err > 0.0 {
            0.9 * (opts.tolerance / err).powf(0.2)
        } else {
            5.0
        };
        h *= factor.clamp(0.2, 5.0);
    }

    StateVector::from_amplitudes(atom_count, y)
}
