//! Direct solution of the s-wave radial equation in `2 + eps` dimensions.

mod bound;
mod grid;
mod shoot;

pub use bound::{bound_state_direct, BoundStateResult, Method, MATCH_FRACTION};
pub use grid::{RadialGrid, DEFAULT_NODES, DEFAULT_RFIRST, DEFAULT_RMAX, MIN_NODES, MIN_RMAX};
pub use shoot::{
    coupling_spectrum, critical_coupling_shoot, integrate_zero_energy, CouplingSpectrum, ZeroEnergySolution,
    ZeroEnergyState,
};
