//! Frequency newtype fixing the cyclic-vs-angular convention once for the whole crate.

use std::f64::consts::TAU;

/// A frequency (or detuning) stored by its cyclic value in MHz — the `X/2π`
/// convention in which experimental parameters are usually quoted. The angular
/// counterpart in rad/μs is derived on demand and is exactly `2π ×` the cyclic
/// value. Magnitudes are nonnegative; detunings may be signed.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Frequency {
    cyclic_mhz: f64,
}

impl Frequency {
    /// The zero frequency.
    pub const ZERO: Frequency = Frequency { cyclic_mhz: 0.0 };

    /// Builds from a cyclic value in MHz (`X/2π`).
    pub fn from_cyclic(cyclic_mhz: f64) -> Self {
        Frequency { cyclic_mhz }
    }

    /// Builds from an angular value in rad/μs.
    pub fn from_angular(rad_per_us: f64) -> Self {
        Frequency {
            cyclic_mhz: rad_per_us / TAU,
        }
    }

    /// Cyclic value in MHz.
    pub fn cyclic(self) -> f64 {
        self.cyclic_mhz
    }

    /// Angular value in rad/μs (= 2π × cyclic).
    pub fn angular(self) -> f64 {
        TAU * self.cyclic_mhz
    }

    /// True when the value is finite.
    pub fn is_finite(self) -> bool {
        self.cyclic_mhz.is_finite()
    }
}

impl std::fmt::Display for Frequency {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} MHz", self.cyclic_mhz)
    }
}
