//! Coupling sweeps across all solution methods and critical-exponent fits.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::RadialPotential;
use crate::radial::{bound_state_direct, critical_coupling_shoot, RadialGrid};
use crate::threshold::{exponents, near_threshold_energy, separable_energy, threshold_law, ThresholdLaw, WFunction};
use crate::twod::{binding_energy_2d_with_guard, DEFAULT_GUARD};

/// Least-squares slope of `y` against `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Bound,
    Unbound,
    Failed,
}

/// Energies at one coupling. Methods that do not apply or fail are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub status: RowStatus,
    pub e_direct: Option<f64>,
    pub e_separable: Option<f64>,
    pub e_near_threshold: Option<f64>,
    pub e_2d_asymptote: Option<f64>,
    /// Why the direct solver gave no energy, when it failed.
    pub note: Option<String>,
}

/// Threshold data computed once per sweep.
#[derive(Debug, Clone)]
pub struct SweepContext {
    pub eps: f64,
    pub lambda_c: Option<f64>,
    pub law: Option<ThresholdLaw>,
    w: Option<WFunction>,
    pub guard: f64,
}

impl SweepContext {
    pub fn new(p: &RadialPotential, eps: f64, grid: &RadialGrid) -> Result<Self> {
        Self::with_guard(p, eps, grid, DEFAULT_GUARD)
    }

    pub fn with_guard(p: &RadialPotential, eps: f64, grid: &RadialGrid, guard: f64) -> Result<Self> {
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::InvalidInput(format!("eps must be non-negative, got {eps}")));
        }
        if eps == 0.0 {
            return Ok(Self {
                eps,
                lambda_c: Some(0.0),
                law: None,
                w: None,
                guard,
            });
        }
        let state = critical_coupling_shoot(p, eps, grid)?;
        let law = if eps != 2.0 { Some(threshold_law(p, eps, grid)?) } else { None };
        Ok(Self {
            eps,
            lambda_c: Some(state.lambda_c),
            law,
            w: (eps < 4.0).then(|| WFunction::from_state(p, &state)),
            guard,
        })
    }

    fn row(&self, p: &RadialPotential, lambda: f64, grid: &RadialGrid) -> SweepRow {
        let mut row = SweepRow {
            lambda,
            status: RowStatus::Failed,
            e_direct: None,
            e_separable: None,
            e_near_threshold: None,
            e_2d_asymptote: None,
            note: None,
        };
        match bound_state_direct(p, self.eps, lambda, grid) {
            Ok(r) => {
                row.status = RowStatus::Bound;
                row.e_direct = Some(r.energy);
            }
            Err(Error::NoBoundState(_)) => {
                row.status = RowStatus::Unbound;
                return row;
            }
            Err(e) => row.note = Some(e.to_string()),
        }
        if let Some(w) = &self.w {
            row.e_separable = separable_energy(w, self.eps, lambda).ok().map(|r| r.energy);
        }
        if let Some(law) = &self.law {
            row.e_near_threshold = near_threshold_energy(law, lambda).ok().map(|r| r.energy);
        }
        if self.eps == 0.0 {
            row.e_2d_asymptote = binding_energy_2d_with_guard(p, lambda, self.guard).ok().map(|r| r.energy);
        }
        row
    }
}

/// Every method at each coupling, computed in parallel and returned in
/// input order.
pub fn sweep(p: &RadialPotential, eps: f64, lambdas: &[f64], grid: &RadialGrid) -> Result<Vec<SweepRow>> {
    let ctx = SweepContext::new(p, eps, grid)?;
    Ok(sweep_with(&ctx, p, lambdas, grid))
}

pub fn sweep_with(ctx: &SweepContext, p: &RadialPotential, lambdas: &[f64], grid: &RadialGrid) -> Vec<SweepRow> {
    lambdas.par_iter().map(|&l| ctx.row(p, l, grid)).collect()
}

pub const MIN_FIT_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// Bounds on `(λ - λ_c)/λ`.
    pub window: (f64, f64),
    pub points: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            window: (1e-4, 1e-2),
            points: 12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub eps: f64,
    pub lambda_c: f64,
    /// Slope of `ln|E|` against `ln(λ - λ_c)`.
    pub fitted_exponent: f64,
    pub expected_exponent: f64,
    pub relative_error: f64,
    /// `ν = β/2` from the fitted slope.
    pub fitted_nu: f64,
    pub expected_nu: f64,
    pub points_used: usize,
    pub fit_window: (f64, f64),
}

/// Fits `β` in `E ~ (λ - λ_c)^β` from direct solutions spaced
/// logarithmically in `(λ - λ_c)/λ`.
pub fn fit_exponent(p: &RadialPotential, eps: f64, grid: &RadialGrid, opts: FitOptions) -> Result<FitReport> {
    let (expected, expected_nu) = exponents(eps)?;
    let (lo, hi) = opts.window;
    if !(lo > 0.0 && hi > lo && hi < 1.0) {
        return Err(Error::InvalidInput(format!("fit window ({lo}, {hi}) must satisfy 0 < lo < hi < 1")));
    }
    if opts.points < MIN_FIT_POINTS {
        return Err(Error::InvalidInput(format!("at least {MIN_FIT_POINTS} points required")));
    }
    let lambda_c = critical_coupling_shoot(p, eps, grid)?.lambda_c;
    let n = opts.points;
    let offsets: Vec<f64> = (0..n)
        .map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64))
        .collect();
    let solved: Vec<(f64, f64)> = offsets
        .par_iter()
        .filter_map(|&x| {
            let lambda = lambda_c / (1.0 - x);
            let e = bound_state_direct(p, eps, lambda, grid).ok()?.energy;
            Some(((lambda - lambda_c).ln(), (-e).ln()))
        })
        .collect();
    if solved.len() < MIN_FIT_POINTS {
        return Err(Error::Fit(format!("only {} of {n} points converged", solved.len())));
    }
    let (x, y): (Vec<f64>, Vec<f64>) = solved.into_iter().unzip();
    let beta = ls_slope(&x, &y);
    Ok(FitReport {
        eps,
        lambda_c,
        fitted_exponent: beta,
        expected_exponent: expected,
        relative_error: ((beta - expected) / expected).abs(),
        fitted_nu: 0.5 * beta,
        expected_nu,
        points_used: x.len(),
        fit_window: opts.window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{make_catalog_potential, PotentialKind};

    #[test]
    fn slope_of_a_line() {
        let x = [1.0, 2.0, 3.0, 5.0];
        let y: Vec<f64> = x.iter().map(|x| 3.0 - 2.5 * x).collect();
        assert!((ls_slope(&x, &y) + 2.5).abs() < 1e-14);
    }

    #[test]
    fn sweep_rows_in_order() {
        let p = make_catalog_potential(PotentialKind::SquareWell, 1.0).unwrap();
        let g = RadialGrid::for_potential(&p).unwrap();
        let lambdas: Vec<f64> = (0..10).map(|k| 2.0 + 0.2 * k as f64).collect();
        let rows = sweep(&p, 1.0, &lambdas, &g).unwrap();
        assert_eq!(rows.len(), 10);
        assert!(rows.iter().zip(&lambdas).all(|(r, l)| r.lambda == *l));
        // λ_c = π²/4 ≈ 2.467
        for r in &rows {
            if r.lambda < 2.46 {
                assert_eq!(r.status, RowStatus::Unbound);
                assert!(r.e_direct.is_none() && r.e_separable.is_none() && r.e_near_threshold.is_none());
            } else {
                assert_eq!(r.status, RowStatus::Bound);
                assert!(r.e_separable.is_some() && r.e_near_threshold.is_some());
                assert!(r.e_2d_asymptote.is_none());
            }
        }
        let e: Vec<f64> = rows.iter().filter_map(|r| r.e_direct).collect();
        assert!(e.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn fit_rejects_bad_options() {
        let p = make_catalog_potential(PotentialKind::SquareWell, 1.0).unwrap();
        let g = RadialGrid::for_potential(&p).unwrap();
        assert!(fit_exponent(&p, 2.0, &g, FitOptions::default()).is_err());
        let few = FitOptions { points: 5, ..FitOptions::default() };
        assert!(fit_exponent(&p, 1.0, &g, few).is_err());
    }

    #[test]
    fn square_well_exponent() {
        let p = make_catalog_potential(PotentialKind::SquareWell, 1.0).unwrap();
        let g = RadialGrid::for_potential(&p).unwrap();
        let r = fit_exponent(&p, 1.0, &g, FitOptions::default()).unwrap();
        assert!(r.relative_error < 0.02, "{r:?}");
        assert_eq!(r.points_used, 12);
        assert_eq!(r.expected_nu, 1.0);
    }
}
