//! Crate-wide error type.

/// Convenience alias used by every fallible operation in the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A geometry label outside the supported set.
    #[error("unknown geometry kind `{0}` (expected pair, square4, cube8 or sphere_cut)")]
    UnknownGeometry(String),

    /// `sphere_cut` requested without a cutoff radius.
    #[error("sphere_cut geometry requires a positive cutoff radius r0")]
    MissingCutoff,

    /// An operation that needs more atoms than the lattice holds.
    #[error("operation needs at least {needed} atoms, lattice has {found}")]
    TooFewAtoms { needed: usize, found: usize },

    /// A pair separation below the nearest-neighbor spacing.
    #[error("pair separation R/d = {0} is below 1 (closer than the nearest-neighbor spacing)")]
    PairTooClose(f64),

    /// A distance exponent outside the supported set.
    #[error("distance exponent {0} unsupported (allowed: 0, 3, 6)")]
    BadExponent(i32),

    /// A state vector whose length does not match the atom count.
    #[error("state dimension {found} does not match 4^{atoms} = {expected}")]
    DimensionMismatch {
        found: usize,
        expected: usize,
        atoms: usize,
    },

    /// More atoms than the simulation cap allows.
    #[error("atom count {0} exceeds the simulation cap of {1}")]
    AtomCountOverCap(usize, usize),

    /// The adaptive integrator could not meet its tolerance within its step budget.
    #[error(
        "integrator failed to meet tolerance {tolerance:e} within {max_steps} steps \
         (reached t = {t_reached} of {t_end} us)"
    )]
    IntegratorFailure {
        tolerance: f64,
        max_steps: u64,
        t_reached: f64,
        t_end: f64,
    },

    /// A population left [0, 1] by more than the numerical clamp window.
    #[error("population {0} escaped [0, 1] beyond the 1e-12 clamp window")]
    PopulationOutOfRange(f64),

    /// An optimization bracket that contains no interior minimum.
    #[error("no interior minimum of the budget inside [{0}, {1}] MHz")]
    NoInteriorMinimum(f64, f64),

    /// A computation produced NaN or infinity.
    #[error("non-finite value produced in {0}")]
    NonFinite(String),

    /// Invalid or inconsistent input values.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A configuration document that failed to parse or validate.
    #[error("configuration error at `{path}`: {message}")]
    Config { path: String, message: String },
}
