use critbind_core::potentials::{load_tabulated, make_catalog_potential, PotentialKind};
use critbind_core::radial::{bound_state_direct, critical_coupling_shoot, RadialGrid};
use critbind_core::specfun::{bessel_ik, gamma_fn, green_e, green_zero, swave_green_e, BesselOrder};
use critbind_core::twod::two_center_energy;
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = PotentialKind> {
    prop::sample::select(PotentialKind::CATALOG.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bessel_wronskian(nu in 0.0f64..2.95, x in 1e-3f64..300.0) {
        let s = bessel_ik(BesselOrder::new(nu).unwrap(), x).unwrap();
        let w = s.i * s.kp - s.ip * s.k;
        prop_assert!((w * x + 1.0).abs() < 1e-12, "ν={nu} x={x}: {w}");
    }

    #[test]
    fn gamma_recurrence(x in -4.9f64..30.0) {
        prop_assume!((x - x.round()).abs() > 1e-3 || x > 0.5);
        let g = gamma_fn(x).unwrap();
        let g1 = gamma_fn(x + 1.0).unwrap();
        prop_assert!((g1 / (x * g) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn green_functions_ordered(eps in 0.05f64..1.95, kappa in 1e-3f64..10.0, r in 1e-3f64..10.0) {
        let g0 = green_zero(eps, r).unwrap();
        let g = green_e(eps, kappa, r).unwrap();
        prop_assert!(g > 0.0 && g < g0);
        let g2 = green_e(eps, 1.5 * kappa, r).unwrap();
        prop_assert!(g2 < g);
    }

    #[test]
    fn swave_green_is_symmetric(eps in 0.05f64..1.95, kappa in 1e-2f64..5.0, r in 1e-2f64..5.0, rp in 1e-2f64..5.0) {
        let a = swave_green_e(eps, kappa, r, rp).unwrap();
        let b = swave_green_e(eps, kappa, rp, r).unwrap();
        prop_assert!(((a - b) / a).abs() < 1e-13);
    }

    #[test]
    fn two_center_energy_times_separation(k in 1e-6f64..1e-2, r in 1.0f64..1e3) {
        let a = two_center_energy(k, r).unwrap();
        let b = two_center_energy(k, 2.0 * r).unwrap();
        prop_assert!(a.energy_e2 < 0.0);
        prop_assert!((a.energy_e2 / b.energy_e2 - 2.0).abs() < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // λ_c scales as 1/a² and is attained by a nodeless threshold state.
    #[test]
    fn critical_coupling_scales_with_range(k in kind(), eps in 0.2f64..1.8, s in 0.5f64..3.0) {
        let p = make_catalog_potential(k, 1.0).unwrap();
        let q = make_catalog_potential(k, s).unwrap();
        let lp = critical_coupling_shoot(&p, eps, &RadialGrid::for_potential(&p).unwrap()).unwrap().lambda_c;
        let lq = critical_coupling_shoot(&q, eps, &RadialGrid::for_potential(&q).unwrap()).unwrap().lambda_c;
        prop_assert!((lq * s * s / lp - 1.0).abs() < 1e-8, "{k} eps={eps} s={s}: {lp} {lq}");
    }

    #[test]
    fn binding_grows_with_coupling(k in kind(), eps in 0.3f64..1.7, d1 in 0.01f64..0.5, d2 in 0.01f64..0.5) {
        prop_assume!((d1 - d2).abs() > 1e-3);
        let p = make_catalog_potential(k, 1.0).unwrap();
        let g = RadialGrid::for_potential(&p).unwrap();
        let lc = critical_coupling_shoot(&p, eps, &g).unwrap().lambda_c;
        let e = |d: f64| bound_state_direct(&p, eps, lc * (1.0 + d), &g).unwrap().energy;
        let (lo, hi) = if d1 < d2 { (d1, d2) } else { (d2, d1) };
        prop_assert!(e(hi) < e(lo) && e(lo) < 0.0);
    }

    // A densely tabulated catalog profile behaves like the analytic one.
    #[test]
    fn tabulated_profile_matches_analytic(eps in 0.3f64..1.5) {
        let p = make_catalog_potential(PotentialKind::Exponential, 1.0).unwrap();
        let pts: Vec<(f64, f64)> = (0..400).map(|i| {
            let r = 1e-4 * (6e5f64).powf(i as f64 / 399.0);
            (r, p.value(r))
        }).collect();
        let t = load_tabulated(&pts).unwrap();
        let lt = critical_coupling_shoot(&t, eps, &RadialGrid::new(&t, 4000, 100.0 * t.range_a()).unwrap()).unwrap().lambda_c;
        let lp = critical_coupling_shoot(&p, eps, &RadialGrid::for_potential(&p).unwrap()).unwrap().lambda_c;
        prop_assert!((lt / lp - 1.0).abs() < 1e-5, "{lt} vs {lp}");
    }
}
