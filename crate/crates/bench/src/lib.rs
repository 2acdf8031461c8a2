//! Shared fixtures for the solver benchmarks.

use critbind_core::radial::RadialGrid;
use critbind_core::{make_catalog_potential, PotentialKind, RadialPotential};

/// Unit-range exponential potential on its default grid.
pub fn exponential_fixture() -> (RadialPotential, RadialGrid) {
    let p = make_catalog_potential(PotentialKind::Exponential, 1.0).expect("catalog potential");
    let grid = RadialGrid::for_potential(&p).expect("default grid");
    (p, grid)
}
