//! Weakly bound states of a particle in attractive short-range potentials in
//! `d = 2 + eps` dimensions.
//!
//! Units are `hbar = 2m = 1`, so the Schrödinger operator is
//! `-Δ + λ V(r)` and energies carry units of inverse length squared.
//!
//! * [`specfun`]: gamma, modified Bessel functions, Green's functions.
//! * [`potentials`]: catalog and tabulated radial profiles and their moments.
//! * [`radial`]: direct ODE solver (critical couplings, bound states, coupling ladder).
//! * [`threshold`]: Green's-function formulas for `λ_c`, the prefactor `A`,
//!   the near-threshold law and the separable model.
//! * [`twod`]: the two-dimensional limit, mean range, prefactor `C`, two centers.
//! * [`analysis`]: sweeps and critical-exponent fits built on the above.

pub mod analysis;
pub mod error;
pub mod potentials;
pub mod quad;
pub mod radial;
pub mod roots;
pub mod specfun;
pub mod threshold;
pub mod twod;

mod ode;

pub use error::{Error, Result};
pub use potentials::{load_tabulated, make_catalog_potential, moments, Moments, PotentialKind, RadialPotential};
pub use radial::{
    bound_state_direct, coupling_spectrum, critical_coupling_shoot, integrate_zero_energy,
    BoundStateResult, CouplingSpectrum, Method, RadialGrid, ZeroEnergySolution, ZeroEnergyState,
};
pub use specfun::{BesselOrder, GreenParams, EULER_GAMMA};
pub use threshold::{ThresholdLaw, WFunction};
pub use twod::{PlanarPotential, TwoCenterResult, TwoDAsymptotics};
