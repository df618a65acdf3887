//! Exact state-vector simulation of the three-step protocol on the 4^N product space.

mod hamiltonian;
mod integrator;
mod protocol;
mod state;

pub use hamiltonian::{BlockadeMode, DecaySpec, HamiltonianOp, HamiltonianSpec, Step};
pub use integrator::{evolve, EvolveOptions};
pub use protocol::{ideal_target, norm_loss_decay, run_protocol, ProtocolResult, ProtocolSpec};
pub use state::{fidelity, StateVector, LEVELS_PER_ATOM};
