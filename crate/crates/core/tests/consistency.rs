//! Cross-method agreement between the shooting solver, the Green's-function
//! formulas and the two-dimensional asymptotics.

use std::f64::consts::{LN_2, PI};

use critbind_core::analysis::{fit_exponent, FitOptions};
use critbind_core::potentials::{make_catalog_potential, PotentialKind, RadialPotential};
use critbind_core::radial::{bound_state_direct, critical_coupling_shoot, RadialGrid};
use critbind_core::threshold::{lambda_c_integral, near_threshold_energy, prefactor_a, separable_energy, threshold_law, WFunction};
use critbind_core::twod::{binding_energy_2d, epsilon_expansion, prefactor_c_direct, two_center_energy, PlanarPotential};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn setup(kind: PotentialKind) -> (RadialPotential, RadialGrid) {
    let p = make_catalog_potential(kind, 1.0).unwrap();
    let g = RadialGrid::for_potential(&p).unwrap();
    (p, g)
}

#[test]
fn critical_coupling_two_routes() {
    for kind in PotentialKind::CATALOG {
        let (p, g) = setup(kind);
        for eps in [0.3, 0.5, 1.0, 1.5] {
            let state = critical_coupling_shoot(&p, eps, &g).unwrap();
            let w = WFunction::from_state(&p, &state);
            let lc = lambda_c_integral(&w, eps).unwrap();
            assert!(rel(lc, state.lambda_c) < 1e-7, "{kind} eps={eps}: {lc} vs {}", state.lambda_c);
        }
    }
}

#[test]
fn square_well_three_dimensions() {
    let (p, g) = setup(PotentialKind::SquareWell);
    let state = critical_coupling_shoot(&p, 1.0, &g).unwrap();
    assert!(rel(state.lambda_c, PI * PI / 4.0) < 1e-7);
    let w = WFunction::from_state(&p, &state);
    assert!(rel(lambda_c_integral(&w, 1.0).unwrap(), PI * PI / 4.0) < 1e-7);
    assert!(rel(prefactor_a(&w, 1.0).unwrap(), PI * PI / 8.0) < 1e-6);
}

#[test]
fn yukawa_critical_coupling() {
    let (p, g) = setup(PotentialKind::YukawaLike);
    let lc = critical_coupling_shoot(&p, 1.0, &g).unwrap().lambda_c;
    assert!((lc - 1.6798).abs() < 1e-3, "{lc}");
    let t = epsilon_expansion(&p).unwrap();
    assert!((t.lambda_c_estimate(1.0) - (1.0 + LN_2)).abs() < 1e-9);
}

#[test]
fn prefactor_near_two_dimensions() {
    let (p, g) = setup(PotentialKind::Exponential);
    let a = |eps: f64| {
        let state = critical_coupling_shoot(&p, eps, &g).unwrap();
        prefactor_a(&WFunction::from_state(&p, &state), eps).unwrap()
    };
    assert!((a(1e-3) - 1.0).abs() < 1e-2);
    let ln_c = epsilon_expansion(&p).unwrap().prefactor_c.ln();
    let bridge = a(1e-2).ln() / 1e-2;
    assert!(rel(bridge, ln_c) < 0.02, "{bridge} vs {ln_c}");
}

#[test]
fn separable_model_near_threshold() {
    let (p, g) = setup(PotentialKind::SquareWell);
    let state = critical_coupling_shoot(&p, 1.0, &g).unwrap();
    let w = WFunction::from_state(&p, &state);
    for d in [1e-3, 5e-4, 1e-4] {
        let lambda = state.lambda_c / (1.0 - d);
        let sep = separable_energy(&w, 1.0, lambda).unwrap().energy;
        let direct = bound_state_direct(&p, 1.0, lambda, &g).unwrap().energy;
        let dev = rel(sep, direct);
        assert!(dev < 0.01 && dev <= 10.0 * d, "δ={d}: {sep} vs {direct}");
    }
    assert!(separable_energy(&w, 1.0, state.lambda_c).is_err());
}

#[test]
fn separable_model_other_shapes() {
    for kind in [PotentialKind::Exponential, PotentialKind::Gaussian, PotentialKind::YukawaLike] {
        let (p, g) = setup(kind);
        let state = critical_coupling_shoot(&p, 1.0, &g).unwrap();
        let w = WFunction::from_state(&p, &state);
        let d = 1e-3;
        let lambda = state.lambda_c / (1.0 - d);
        let sep = separable_energy(&w, 1.0, lambda).unwrap().energy;
        let direct = bound_state_direct(&p, 1.0, lambda, &g).unwrap().energy;
        assert!(rel(sep, direct) <= 10.0 * d, "{kind}: {sep} vs {direct}");
    }
}

#[test]
fn near_threshold_law_at_half() {
    let (p, g) = setup(PotentialKind::Exponential);
    let law = threshold_law(&p, 0.5, &g).unwrap();
    let lambda = law.lambda_c / (1.0 - 0.01);
    let e = near_threshold_energy(&law, lambda).unwrap().energy;
    let direct = bound_state_direct(&p, 0.5, lambda, &g).unwrap().energy;
    assert!(rel(e, direct) < 0.05, "{e} vs {direct}");
}

#[test]
fn linear_law_above_four_dimensions() {
    let (p, g) = setup(PotentialKind::Exponential);
    let law = threshold_law(&p, 3.0, &g).unwrap();
    assert_eq!((law.beta, law.nu), (1.0, 0.5));
    let lambda = law.lambda_c / (1.0 - 1.5e-3);
    let e = near_threshold_energy(&law, lambda).unwrap().energy;
    let direct = bound_state_direct(&p, 3.0, lambda, &g).unwrap().energy;
    assert!(rel(e, direct) < 1e-2, "{e} vs {direct}");
}

#[test]
fn fitted_exponents() {
    for (kind, eps, tol) in [
        (PotentialKind::SquareWell, 1.0, 0.02),
        (PotentialKind::Exponential, 0.5, 0.02),
        (PotentialKind::Exponential, 1.0, 0.02),
        (PotentialKind::Exponential, 3.0, 0.03),
    ] {
        let (p, g) = setup(kind);
        let r = fit_exponent(&p, eps, &g, FitOptions::default()).unwrap();
        assert!(r.relative_error < tol, "{kind} eps={eps}: {r:?}");
        assert_eq!(r.fitted_nu, 0.5 * r.fitted_exponent);
    }
}

#[test]
fn separable_model_close_to_two_dimensions() {
    let (p, g) = setup(PotentialKind::Exponential);
    let eps = 1e-3;
    let state = critical_coupling_shoot(&p, eps, &g).unwrap();
    let w = WFunction::from_state(&p, &state);
    let sep = separable_energy(&w, eps, 0.2).unwrap().kappa;
    let direct = bound_state_direct(&p, 0.0, 0.2, &g).unwrap().kappa;
    assert!(rel(sep, direct) < 0.05, "{sep} vs {direct}");
}

#[test]
fn two_dimensional_asymptote() {
    let (p, g) = setup(PotentialKind::Exponential);
    let mut prev = f64::INFINITY;
    for lambda in [0.25, 0.2, 0.15] {
        let asym = binding_energy_2d(&p, lambda).unwrap().kappa;
        let direct = bound_state_direct(&p, 0.0, lambda, &g).unwrap().kappa;
        let dev = rel(asym, direct);
        assert!(dev < prev, "λ={lambda}: {dev}");
        if lambda == 0.2 {
            assert!(dev < 0.05);
        }
        prev = dev;
    }
}

#[test]
fn composed_two_center_route() {
    let (p, _) = setup(PotentialKind::Exponential);
    let lambda = 0.1;
    let kappa0 = binding_energy_2d(&p, lambda).unwrap().kappa;
    for r in [30.0, 60.0, 100.0, 200.0, 300.0] {
        let pair = PlanarPotential::two_center(&p, r).unwrap();
        let c = prefactor_c_direct(&pair).unwrap();
        let area = pair.area_integral().unwrap().abs();
        let kappa = c * (-2.0 * PI / (lambda * area)).exp();
        let e2 = two_center_energy(kappa0, r).unwrap().energy_e2;
        assert!(rel(-kappa * kappa, e2) < 0.1, "R={r}: {} vs {e2}", -kappa * kappa);
    }
}
