//! The five subcommands. Inputs and outputs are dimensionless: couplings in
//! units of `a⁻²`, energies in `a⁻²`, lengths in `a`.

use critbind_core::analysis::{fit_exponent, sweep_with, FitOptions, RowStatus, SweepContext};
use critbind_core::potentials::RadialPotential;
use critbind_core::radial::critical_coupling_shoot;
use critbind_core::threshold::{lambda_c_integral, WFunction};
use critbind_core::twod::{
    binding_energy_2d_with_guard, binding_energy_planar, epsilon_expansion, table1, two_center_energy,
    two_center_prefactor, PlanarPotential,
};
use critbind_core::{Error, EULER_GAMMA};

use crate::config::RunConfig;
use crate::output::{Cell, Report};
use crate::CliError;

const UNITS: &str = "hbar = 2m = 1; lengths in units of a, couplings and energies in units of 1/a^2";

fn header(r: &mut Report, cfg: &RunConfig) {
    r.meta("potential", cfg.potential.label());
    r.meta("a", format!("{:.16e}", cfg.a));
    r.meta("units", UNITS);
}

/// Critical coupling by shooting and from the Green's-function integral,
/// plus the two-term small-`eps` estimate.
pub fn critical(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.build_potential()?;
    let grid = cfg.build_grid(&p)?;
    let eps = cfg.eps;
    let a2 = cfg.a * cfg.a;
    let state = critical_coupling_shoot(&p, eps, &grid)?;
    let shoot = state.lambda_c * a2;
    let integral = if eps < 2.0 {
        Some(lambda_c_integral(&WFunction::from_state(&p, &state), eps)? * a2)
    } else {
        None
    };
    let t = epsilon_expansion(&p)?;
    let mut r = Report::new(&[
        "eps",
        "lambda_c_shoot",
        "lambda_c_integral",
        "rel_diff",
        "lambda_c_expansion",
        "lambda1",
        "lambda2",
    ]);
    header(&mut r, cfg);
    r.push(vec![
        Cell::Num(eps),
        Cell::Num(shoot),
        Cell::opt(integral),
        Cell::opt(integral.map(|x| ((x - shoot) / shoot).abs())),
        Cell::Num(t.lambda_c_estimate(eps) * a2),
        Cell::Num(t.lambda1 * a2),
        Cell::Num(t.lambda2 * a2),
    ]);
    Ok(r)
}

/// One row per coupling with every applicable method.
pub fn sweep(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.build_potential()?;
    let grid = cfg.build_grid(&p)?;
    let a2 = cfg.a * cfg.a;
    let lambdas: Vec<f64> = cfg.lambdas()?.iter().map(|l| l / a2).collect();
    let ctx = SweepContext::with_guard(&p, cfg.eps, &grid, cfg.guard)?;
    let rows = sweep_with(&ctx, &p, &lambdas, &grid);
    let mut r = Report::new(&[
        "lambda",
        "status",
        "E_direct",
        "E_separable",
        "E_near_threshold",
        "E_2d_asymptote",
        "note",
    ]);
    header(&mut r, cfg);
    r.meta("eps", cfg.eps);
    if let Some(lc) = ctx.lambda_c {
        r.meta("lambda_c", format!("{:.16e}", lc * a2));
    }
    let scaled = |e: Option<f64>| Cell::opt(e.map(|e| e * a2));
    for row in rows {
        r.push(vec![
            Cell::Num(row.lambda * a2),
            Cell::Text(
                match row.status {
                    RowStatus::Bound => "bound",
                    RowStatus::Unbound => "unbound",
                    RowStatus::Failed => "failed",
                }
                .into(),
            ),
            scaled(row.e_direct),
            scaled(row.e_separable),
            scaled(row.e_near_threshold),
            scaled(row.e_2d_asymptote),
            row.note.map_or(Cell::Empty, Cell::Text),
        ]);
    }
    Ok(r)
}

pub fn fit(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.build_potential()?;
    let grid = cfg.build_grid(&p)?;
    let opts = FitOptions {
        window: cfg.window,
        points: cfg.points,
    };
    let f = fit_exponent(&p, cfg.eps, &grid, opts)?;
    let mut r = Report::new(&[
        "eps",
        "lambda_c",
        "fitted_exponent",
        "expected_exponent",
        "relative_error",
        "fitted_nu",
        "expected_nu",
        "points_used",
        "window_lo",
        "window_hi",
    ]);
    header(&mut r, cfg);
    r.meta("fit", "least-squares slope of ln|E| against ln(lambda - lambda_c)");
    r.push(vec![
        Cell::Num(f.eps),
        Cell::Num(f.lambda_c * cfg.a * cfg.a),
        Cell::Num(f.fitted_exponent),
        Cell::Num(f.expected_exponent),
        Cell::Num(f.relative_error),
        Cell::Num(f.fitted_nu),
        Cell::Num(f.expected_nu),
        Cell::Int(f.points_used),
        Cell::Num(f.fit_window.0),
        Cell::Num(f.fit_window.1),
    ]);
    Ok(r)
}

const QUANTITIES: [&str; 4] = ["lambda1", "lambda2", "a_bar", "C"];

pub fn table(_cfg: &RunConfig) -> Result<Report, CliError> {
    let rows = table1()?;
    let mut r = Report::new(&["potential", "quantity", "computed", "closed_form", "rel_error"]);
    r.meta("units", "a = 1; lambda in 1/a^2, a_bar in a, C in 1/a");
    r.meta("gamma", format!("{EULER_GAMMA:.16e}"));
    let mut worst = 0.0f64;
    for row in &rows {
        let errs = row.rel_errors();
        for k in 0..4 {
            r.push(vec![
                Cell::Text(row.kind.to_string()),
                Cell::Text(QUANTITIES[k].into()),
                Cell::Num(row.computed[k]),
                Cell::Num(row.closed_form[k]),
                Cell::Num(errs[k]),
            ]);
            worst = worst.max(errs[k]);
        }
        let c_err = ((row.c_direct - row.closed_form[3]) / row.closed_form[3]).abs();
        r.push(vec![
            Cell::Text(row.kind.to_string()),
            Cell::Text("C_planar".into()),
            Cell::Num(row.c_direct),
            Cell::Num(row.closed_form[3]),
            Cell::Num(c_err),
        ]);
    }
    r.meta("max_rel_error", format!("{worst:.3e}"));
    Ok(r)
}

/// Lower and upper ends of `a << R << 1/κ₀`.
const REGIME_LO: f64 = 30.0;
const REGIME_HI: f64 = 0.3;

pub fn two_center(cfg: &RunConfig, warn: &mut dyn FnMut(String)) -> Result<Report, CliError> {
    if cfg.separations.is_empty() {
        return Err(CliError::Config("no separations given (use --separations)".into()));
    }
    let a = cfg.a;
    let p: Option<RadialPotential> = if cfg.lambda.is_some() { Some(cfg.build_potential()?) } else { None };
    let kappa0 = match (cfg.kappa0, cfg.lambda, &p) {
        (Some(k), _, _) => k / a,
        (None, Some(l), Some(p)) => binding_energy_2d_with_guard(p, l / (a * a), cfg.guard)?.kappa,
        _ => return Err(CliError::Config("give --kappa0 or a single-center --lambda".into())),
    };
    if cfg.composed && (cfg.lambda.is_none() || cfg.kappa0.is_some()) {
        return Err(CliError::Config("the composed route needs --lambda (and no --kappa0)".into()));
    }
    let mut columns = vec!["R", "E2", "in_regime"];
    if cfg.composed {
        columns.extend(["E2_composed", "deviation"]);
    }
    let mut r = Report::new(&columns);
    header(&mut r, cfg);
    r.meta("prefactor_2exp(-gamma)", format!("{:.16e}", two_center_prefactor()));
    r.meta("kappa0", format!("{:.16e}", kappa0 * a));
    if let Some(l) = cfg.lambda {
        r.meta("lambda", format!("{l:.16e}"));
    }
    let hi = REGIME_HI / (kappa0 * a);
    for &sep in &cfg.separations {
        let res = two_center_energy(kappa0, sep * a)?;
        let e2 = res.energy_e2 * a * a;
        let inside = (REGIME_LO..=hi).contains(&sep);
        if !inside {
            warn(format!("R = {sep} a lies outside the regime [{REGIME_LO}, {hi:.3e}] a"));
        }
        let mut row = vec![Cell::Num(sep), Cell::Num(e2), Cell::Text(inside.to_string())];
        if cfg.composed {
            let pair = PlanarPotential::two_center(p.as_ref().unwrap(), sep * a)?;
            match binding_energy_planar(&pair, cfg.lambda.unwrap() / (a * a), cfg.guard) {
                Ok(b) => {
                    let ec = b.energy * a * a;
                    row.extend([Cell::Num(ec), Cell::Num(ec / e2 - 1.0)]);
                }
                Err(e @ Error::ValidityGuard(_)) => {
                    warn(format!("R = {sep} a: {e}"));
                    row.extend([Cell::Empty, Cell::Empty]);
                }
                Err(e) => return Err(e.into()),
            }
        }
        r.push(row);
    }
    Ok(r)
}
