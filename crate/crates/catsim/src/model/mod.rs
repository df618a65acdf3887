//! Units, lattice geometry, and interaction-law primitives shared by all other modules.

mod interactions;
mod lattice;
mod profile;
mod units;

pub use interactions::{coupling_at, n_scaling, InteractionSet, PairEntry, PairTable};
pub use lattice::{GeometryKind, Lattice};
pub use profile::AngularProfile;
pub use units::Frequency;

/// Drive regime of the transfer pulse: on resonance (Δ₀ = 0) or detuned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Resonant,
    Nonresonant,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Resonant => write!(f, "resonant"),
            Mode::Nonresonant => write!(f, "nonresonant"),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "resonant" => Ok(Mode::Resonant),
            "nonresonant" => Ok(Mode::Nonresonant),
            other => Err(crate::error::Error::InvalidInput(format!(
                "unknown mode '{other}' (expected resonant or nonresonant)"
            ))),
        }
    }
}
