//! JSON scenario configuration: schema, defaults, loading, and conversion
//! into the domain types of the other modules.
//!
//! All frequencies are cyclic (X/2π) in MHz, all times in μs, all lengths
//! in μm. The defaults describe the reference scenario used throughout:
//! an 8-atom cube with 3 μm spacing, Δ_sp(d)/2π = 14.4 MHz,
//! Δ_pp(d)/2π = 0.019 MHz, Δ_ss(d)/2π = 3.7 MHz, τ_p = 57 μs, and an
//! effective transfer Rabi frequency Ω/2π = Ω_p/√2/2π = 0.30 MHz.

use crate::budget::BudgetInputs;
use crate::dynamics::{BlockadeMode, DecaySpec, ProtocolSpec};
use crate::error::{Error, Result};
use crate::model::{Frequency, GeometryKind, InteractionSet, Lattice, Mode};
use serde::{Deserialize, Serialize};
use std::f64::consts::SQRT_2;
use std::path::{Path, PathBuf};

/// Version tag carried by configs and emitted result records.
pub const SCHEMA_VERSION: u32 = 1;

/// Lattice geometry section.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct GeometryConfig {
    pub kind: GeometryKind,
    /// Nearest-neighbor spacing d in μm.
    pub d_um: f64,
    /// Cut radius in units of d; required for the sphere_cut geometry.
    pub r0: Option<f64>,
    /// Keep only the first `atom_count` lattice sites when set.
    pub atom_count: Option<usize>,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            kind: GeometryKind::Cube8,
            d_um: 3.0,
            r0: None,
            atom_count: None,
        }
    }
}

/// Interaction strengths at the nearest-neighbor distance and their
/// power-law exponents.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct InteractionsConfig {
    pub delta_sp_at_d_mhz: f64,
    pub delta_pp_at_d_mhz: f64,
    pub delta_ss_at_d_mhz: f64,
    pub gamma_sp: i32,
    pub gamma_pp: i32,
    pub gamma_ss: i32,
}

impl Default for InteractionsConfig {
    fn default() -> Self {
        InteractionsConfig {
            delta_sp_at_d_mhz: 14.4,
            delta_pp_at_d_mhz: 0.019,
            delta_ss_at_d_mhz: 3.7,
            gamma_sp: 3,
            gamma_pp: 6,
            gamma_ss: 6,
        }
    }
}

/// Drive parameters for both pulses.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct DriveConfig {
    pub omega_s_mhz: f64,
    pub omega_p_mhz: f64,
    pub delta0_mhz: f64,
    pub mode: Mode,
}

impl Default for DriveConfig {
    fn default() -> Self {
        DriveConfig {
            omega_s_mhz: 0.30,
            omega_p_mhz: 0.30 * SQRT_2,
            delta0_mhz: 5.0,
            mode: Mode::Resonant,
        }
    }
}

/// Spontaneous-emission model parameters.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct DecayConfig {
    pub tau_p_us: f64,
    pub tau_s_us: Option<f64>,
    pub enabled: bool,
}

impl Default for DecayConfig {
    fn default() -> Self {
        DecayConfig {
            tau_p_us: 57.0,
            tau_s_us: None,
            enabled: false,
        }
    }
}

/// Numerical simulation controls.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationConfig {
    pub tolerance: f64,
    pub blockade_mode: BlockadeMode,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            tolerance: 1e-10,
            blockade_mode: BlockadeMode::Ideal,
        }
    }
}

/// Output routing; command-line flags take precedence over these.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct OutputsConfig {
    pub format: Option<OutputFormat>,
    pub path: Option<PathBuf>,
}

/// Serialization format of a command's primary output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// The full scenario configuration.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub geometry: GeometryConfig,
    pub interactions: InteractionsConfig,
    pub drive: DriveConfig,
    pub decay: DecayConfig,
    pub simulation: SimulationConfig,
    pub outputs: OutputsConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            schema_version: SCHEMA_VERSION,
            geometry: GeometryConfig::default(),
            interactions: InteractionsConfig::default(),
            drive: DriveConfig::default(),
            decay: DecayConfig::default(),
            simulation: SimulationConfig::default(),
            outputs: OutputsConfig::default(),
        }
    }
}

impl ScenarioConfig {
    /// Loads and validates a configuration from a JSON file.
    pub fn load(path: &Path) -> Result<ScenarioConfig> {
        let text = std::fs::read_to_string(path).map_err(|err| Error::Config {
            path: path.display().to_string(),
            message: err.to_string(),
        })?;
        let config = Self::from_json(&text)?;
        config.validate()?;
        Ok(config)
    }

    /// Parses a configuration from JSON text, reporting the key path of any
    /// schema violation.
    pub fn from_json(text: &str) -> Result<ScenarioConfig> {
        let deserializer = &mut serde_json::Deserializer::from_str(text);
        let config: ScenarioConfig =
            serde_path_to_error::deserialize(deserializer).map_err(|err| Error::Config {
                path: err.path().to_string(),
                message: err.inner().to_string(),
            })?;
        Ok(config)
    }

    /// The defaults, already validated.
    pub fn default_validated() -> ScenarioConfig {
        let config = ScenarioConfig::default();
        config
            .validate()
            .expect("default configuration must be valid");
        config
    }

    /// Semantic validation beyond the schema.
    pub fn validate(&self) -> Result<()> {
        let bad = |path: &str, message: &str| -> Error {
            Error::Config {
                path: path.to_string(),
                message: message.to_string(),
            }
        };
        if self.schema_version != SCHEMA_VERSION {
            return Err(bad(
                "schema_version",
                &format!("unsupported version {} (expected {SCHEMA_VERSION})", self.schema_version),
            ));
        }
        if !(self.geometry.d_um > 0.0) || !self.geometry.d_um.is_finite() {
            return Err(bad("geometry.d_um", "must be positive and finite"));
        }
        if self.geometry.atom_count == Some(0) {
            return Err(bad("geometry.atom_count", "must be at least 1 when set"));
        }
        for (path, value) in [
            ("interactions.delta_sp_at_d_mhz", self.interactions.delta_sp_at_d_mhz),
            ("interactions.delta_pp_at_d_mhz", self.interactions.delta_pp_at_d_mhz),
            ("interactions.delta_ss_at_d_mhz", self.interactions.delta_ss_at_d_mhz),
        ] {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(bad(path, "must be nonnegative and finite"));
            }
        }
        if !(self.drive.omega_s_mhz > 0.0) || !self.drive.omega_s_mhz.is_finite() {
            return Err(bad("drive.omega_s_mhz", "must be positive and finite"));
        }
        if !(self.drive.omega_p_mhz > 0.0) || !self.drive.omega_p_mhz.is_finite() {
            return Err(bad("drive.omega_p_mhz", "must be positive and finite"));
        }
        if !self.drive.delta0_mhz.is_finite() {
            return Err(bad("drive.delta0_mhz", "must be finite"));
        }
        if self.drive.mode == Mode::Nonresonant && !(self.drive.delta0_mhz > 0.0) {
            return Err(bad("drive.delta0_mhz", "must be positive in nonresonant mode"));
        }
        if !(self.decay.tau_p_us > 0.0) || !self.decay.tau_p_us.is_finite() {
            return Err(bad("decay.tau_p_us", "must be positive and finite"));
        }
        if let Some(tau_s) = self.decay.tau_s_us {
            if !(tau_s > 0.0) || !tau_s.is_finite() {
                return Err(bad("decay.tau_s_us", "must be positive and finite when set"));
            }
        }
        if !(self.simulation.tolerance > 0.0) || !self.simulation.tolerance.is_finite() {
            return Err(bad("simulation.tolerance", "must be positive and finite"));
        }
        // Exponent validity is enforced by the interaction-set constructor.
        self.interaction_set()?;
        Ok(())
    }

    /// The lattice this configuration describes.
    pub fn lattice(&self) -> Result<Lattice> {
        let lattice = Lattice::build(self.geometry.kind, self.geometry.d_um, self.geometry.r0)?;
        match self.geometry.atom_count {
            Some(n) => lattice.truncate(n),
            None => Ok(lattice),
        }
    }

    /// The interaction strengths and exponents.
    pub fn interaction_set(&self) -> Result<InteractionSet> {
        InteractionSet::new(
            Frequency::from_cyclic(self.interactions.delta_sp_at_d_mhz),
            Frequency::from_cyclic(self.interactions.delta_pp_at_d_mhz),
            Frequency::from_cyclic(self.interactions.delta_ss_at_d_mhz),
            self.interactions.gamma_sp,
            self.interactions.gamma_pp,
            self.interactions.gamma_ss,
        )
    }

    /// The effective transfer Rabi frequency Ω = Ω_p/√2.
    pub fn effective_omega(&self) -> Frequency {
        Frequency::from_cyclic(self.drive.omega_p_mhz / SQRT_2)
    }

    /// The drive frequency the budget treats as free: Ω (resonant) or Δ₀.
    pub fn budget_drive(&self) -> Frequency {
        match self.drive.mode {
            Mode::Resonant => self.effective_omega(),
            Mode::Nonresonant => Frequency::from_cyclic(self.drive.delta0_mhz),
        }
    }

    /// Geometric blockade factor ⟨(R/d)^{2γ_sp}⟩ (1 for a single atom).
    pub fn blockade_pair_factor(&self) -> Result<f64> {
        let lattice = self.lattice()?;
        if lattice.atom_count() < 2 {
            return Ok(1.0);
        }
        lattice.pair_average_power(2 * self.interactions.gamma_sp)
    }

    /// A full protocol specification for the simulate command.
    pub fn protocol_spec(&self) -> Result<ProtocolSpec> {
        let mut spec = ProtocolSpec::new(
            self.lattice()?,
            self.interaction_set()?,
            Frequency::from_cyclic(self.drive.omega_s_mhz),
            Frequency::from_cyclic(self.drive.omega_p_mhz),
        );
        spec.delta0 = Frequency::from_cyclic(self.drive.delta0_mhz);
        spec.mode = self.drive.mode;
        spec.blockade_mode = self.simulation.blockade_mode;
        spec.tolerance = self.simulation.tolerance;
        if self.decay.enabled {
            spec.decay = Some(DecaySpec {
                tau_p_us: self.decay.tau_p_us,
                tau_s_us: self.decay.tau_s_us,
            });
        }
        Ok(spec)
    }

    /// Budget inputs using the given transfer-error coefficient.
    pub fn budget_inputs(&self, coefficient: f64) -> Result<BudgetInputs> {
        Ok(BudgetInputs {
            atom_count: self.lattice()?.atom_count(),
            mode: self.drive.mode,
            drive: self.budget_drive(),
            tau_p_us: self.decay.tau_p_us,
            delta_sp_at_d: Frequency::from_cyclic(self.interactions.delta_sp_at_d_mhz),
            delta_pp_at_d: Frequency::from_cyclic(self.interactions.delta_pp_at_d_mhz),
            blockade_pair_factor: self.blockade_pair_factor()?,
            coefficient,
        })
    }
}
