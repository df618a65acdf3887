//! Simulator and error-budget toolkit for preparing N-atom cat states with an
//! asymmetric Rydberg blockade.
//!
//! The protocol drives three pulses on atoms with levels `|0⟩, |1⟩, |s⟩, |p⟩`:
//! (i) a blockaded excitation `0 → s` shared by all atoms, (ii) a Rydberg-mediated
//! transfer `0 → p → 1` that a single `s` excitation blocks, and (iii) the reversed
//! excitation pulse. The crate provides:
//!
//! - [`model`] — units, lattice geometries, interaction power laws;
//! - [`dynamics`] — exact state-vector simulation on the 4^N product space;
//! - [`perturbation`] — first-order transfer-error operator and the α/β coefficients;
//! - [`budget`] — closed-form transfer populations, error budgets, and Rabi optimization;
//! - [`config`] / [`validate`] — JSON scenario configuration and the built-in check suite.
//!
//! Unit conventions: frequencies enter and leave as cyclic values (MHz, the X/2π
//! convention); internal dynamics use angular rad/μs; times are μs; lengths μm.

// Validation gates are written `!(x > 0.0)` rather than `x <= 0.0` so that a
// NaN input fails them instead of slipping through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod budget;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod perturbation;
pub mod validate;

pub use error::{Error, Result};
pub use model::{
    coupling_at, n_scaling, AngularProfile, Frequency, GeometryKind, InteractionSet, Lattice,
    Mode, PairEntry, PairTable,
};
