//! Green's-function description of the threshold: the critical coupling as
//! a double integral over `W = V ψ₀`, the prefactor of the near-threshold
//! law, the rank-one separable model and the critical exponents.
//!
//! Angular averages reduce every double integral to radial form: the s-wave
//! part of `|r - r'|^{-eps}` is `r_>^{-eps}`, so with `F = r^{1+eps} W`
//!
//! ```text
//! ∫∫ W W' |r - r'|^{-eps} = sigma² · 2 ∫ dr F(r) r^{-eps} ∫_0^r F(r') dr'.
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::RadialPotential;
use crate::radial::{bound_state_direct, critical_coupling_shoot, BoundStateResult, Method, RadialGrid, ZeroEnergyState};
use crate::roots::brent_with_values;
use crate::specfun::{bessel_ik_scaled, gamma_fn, unit_sphere_area};

/// Relative coupling offsets used to calibrate the linear law above four
/// dimensions.
pub const LINEAR_CALIBRATION: [f64; 2] = [1e-3, 2e-3];
const KAPPA_MIN: f64 = 1e-12;
const KAPPA_MAX: f64 = 1e3;

/// `W(r) = v(r) ψ₀(r)` on a radial grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WFunction {
    pub values: Vec<f64>,
    pub eps: f64,
    pub grid: RadialGrid,
}

impl WFunction {
    /// Pointwise product of the potential and the threshold state on the
    /// state's own grid.
    pub fn from_state(p: &RadialPotential, state: &ZeroEnergyState) -> Self {
        let v = state.grid.potential_values(p);
        Self {
            values: v.iter().zip(&state.psi0).map(|(v, psi)| v * psi).collect(),
            eps: state.eps,
            grid: state.grid.clone(),
        }
    }

    pub fn from_values(grid: RadialGrid, values: Vec<f64>, eps: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { values, eps, grid })
    }

    /// `F = r^{1+eps} W`.
    fn weighted(&self, eps: f64) -> Vec<f64> {
        self.grid.nodes().iter().zip(&self.values).map(|(r, w)| r.powf(1.0 + eps) * w).collect()
    }

    /// `∫∫ F(r) F(r') r_>^{-eps} dr dr'`.
    fn kernel_integral(&self, eps: f64) -> f64 {
        let f = self.weighted(eps);
        let c = self.grid.cumulative(&f);
        let g: Vec<f64> = self
            .grid
            .nodes()
            .iter()
            .zip(f.iter().zip(&c))
            .map(|(r, (f, c))| 2.0 * f * r.powf(-eps) * c)
            .collect();
        self.grid.integral(&g)
    }

    /// `∫ W d^{2+eps}r`.
    pub fn volume_integral(&self, eps: f64) -> f64 {
        unit_sphere_area(eps) * self.grid.integral(&self.weighted(eps))
    }
}

fn check_below_two(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 2.0 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension {
            eps,
            reason: "the threshold expansion needs 0 < eps < 2",
        })
    }
}

/// `λ_c = eps sigma_eps / ∫∫ W W' |r - r'|^{-eps}` for a normalised `W`.
pub fn lambda_c_integral(w: &WFunction, eps: f64) -> Result<f64> {
    check_below_two(eps)?;
    let inv = unit_sphere_area(eps) / eps * w.kernel_integral(eps);
    if !(inv > 0.0 && inv.is_finite()) {
        return Err(Error::Quadrature(format!("kernel integral {inv:e} is not positive")));
    }
    Ok(1.0 / inv)
}

/// Prefactor `A` of the near-threshold law.
pub fn prefactor_a(w: &WFunction, eps: f64) -> Result<f64> {
    check_below_two(eps)?;
    let sigma = unit_sphere_area(eps);
    let j = sigma * sigma * w.kernel_integral(eps);
    let vol = w.volume_integral(eps);
    let scale = w.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if vol.abs() <= 1e-12 * scale || !vol.is_finite() {
        return Err(Error::Degenerate(format!("∫W = {vol:e} vanishes")));
    }
    let ratio = gamma_fn(1.0 + 0.5 * eps)? / gamma_fn(1.0 - 0.5 * eps)?;
    Ok(2f64.powf(eps) * ratio * j / (vol * vol))
}

/// Rayleigh-type functional `∫∫ (vΨ) G_0 (vΨ) / (-∫ v Ψ²)` for a trial
/// function `Ψ` on `grid`; equals `1/λ_c` at `Ψ = ψ₀` and is stationary
/// there.
pub fn inverse_coupling_functional(p: &RadialPotential, grid: &RadialGrid, eps: f64, trial: &[f64]) -> Result<f64> {
    check_below_two(eps)?;
    if trial.len() != grid.len() {
        return Err(Error::InvalidInput("trial function does not match the grid".into()));
    }
    let v = grid.potential_values(p);
    let wv: Vec<f64> = v.iter().zip(trial).map(|(v, t)| v * t).collect();
    let w = WFunction::from_values(grid.clone(), wv.clone(), eps)?;
    let sigma = unit_sphere_area(eps);
    let num = sigma / eps * w.kernel_integral(eps);
    let den: Vec<f64> = grid.nodes().iter().zip(wv.iter().zip(trial)).map(|(r, (w, t))| sigma * r.powf(1.0 + eps) * w * t).collect();
    Ok(num / -grid.integral(&den))
}

/// Form of the near-threshold law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum LawForm {
    /// `E = -(A (λ - λ_c)/λ)^{2/eps}`, `0 < eps < 2`.
    Power { prefactor_a: f64 },
    /// `E = -slope (λ - λ_c)/λ`, `eps > 2`; the slope is fitted to direct
    /// solutions rather than predicted.
    FittedLinear { slope: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdLaw {
    pub eps: f64,
    pub lambda_c: f64,
    pub form: LawForm,
    pub beta: f64,
    pub nu: f64,
    /// Proportionality in `ξ ∝ κ^{-1}`; left unnormalised.
    pub xi_scale: f64,
}

impl ThresholdLaw {
    pub fn prefactor_a(&self) -> Option<f64> {
        match self.form {
            LawForm::Power { prefactor_a } => Some(prefactor_a),
            LawForm::FittedLinear { .. } => None,
        }
    }
}

/// `(β, ν)` with `E ~ (λ - λ_c)^β`, `ξ ~ (λ - λ_c)^{-ν}`.
pub fn exponents(eps: f64) -> Result<(f64, f64)> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidInput(format!("eps must be positive, got {eps}")));
    }
    if eps == 2.0 {
        return Err(Error::UnsupportedDimension {
            eps,
            reason: "four dimensions is the marginal case",
        });
    }
    let beta = if eps < 2.0 { 2.0 / eps } else { 1.0 };
    Ok((beta, 0.5 * beta))
}

/// Threshold law for `p` in `2 + eps` dimensions.
pub fn threshold_law(p: &RadialPotential, eps: f64, grid: &RadialGrid) -> Result<ThresholdLaw> {
    let (beta, nu) = exponents(eps)?;
    let state = critical_coupling_shoot(p, eps, grid)?;
    let lambda_c = state.lambda_c;
    let form = if eps < 2.0 {
        let w = WFunction::from_state(p, &state);
        LawForm::Power {
            prefactor_a: prefactor_a(&w, eps)?,
        }
    } else {
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for d in LINEAR_CALIBRATION {
            let lambda = lambda_c / (1.0 - d);
            let e = bound_state_direct(p, eps, lambda, grid)?.energy;
            sxy += -e * d;
            sxx += d * d;
        }
        LawForm::FittedLinear { slope: sxy / sxx }
    };
    Ok(ThresholdLaw {
        eps,
        lambda_c,
        form,
        beta,
        nu,
        xi_scale: 1.0,
    })
}

/// Binding energy from the near-threshold law.
pub fn near_threshold_energy(law: &ThresholdLaw, lambda: f64) -> Result<BoundStateResult> {
    if !(lambda > law.lambda_c) {
        return Err(Error::NoBoundState(format!("λ = {lambda} does not exceed λ_c = {}", law.lambda_c)));
    }
    let x = (lambda - law.lambda_c) / lambda;
    let e = match law.form {
        LawForm::Power { prefactor_a } => -(prefactor_a * x).powf(2.0 / law.eps),
        LawForm::FittedLinear { slope } => -slope * x,
    };
    Ok(BoundStateResult::from_kappa((-e).sqrt(), Method::NearThreshold))
}

/// `λ ∫∫ W G_E W` at `E = -κ²` (the separable-model eigenvalue condition
/// reads `value = 1`).
pub fn separable_response(w: &WFunction, eps: f64, kappa: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 4.0) {
        return Err(Error::UnsupportedDimension {
            eps,
            reason: "the separable model is set up for 0 < eps < 4",
        });
    }
    let nu = 0.5 * eps;
    let r = w.grid.nodes();
    let f = w.weighted(eps);
    let bessel: Vec<_> = r.iter().map(|&x| bessel_ik_scaled(nu, kappa * x)).collect();
    let inner: Vec<f64> = (0..r.len()).map(|i| f[i] * r[i].powf(-nu) * bessel[i].i).collect();
    let s = w.grid.cumulative_decayed(&inner, kappa);
    let outer: Vec<f64> = (0..r.len()).map(|i| 2.0 * f[i] * r[i].powf(-nu) * bessel[i].k * s[i]).collect();
    Ok(unit_sphere_area(eps) * w.grid.integral(&outer))
}

/// Bound state of the separable potential `-λ V|ψ₀⟩⟨ψ₀|V`.
pub fn separable_energy(w: &WFunction, eps: f64, lambda: f64) -> Result<BoundStateResult> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::NoBoundState(format!("coupling {lambda} is not positive")));
    }
    let a = range_scale(w);
    let f = |ln_k: f64| Ok(lambda * separable_response(w, eps, ln_k.exp())? - 1.0);
    let lo = (KAPPA_MIN / a).ln();
    let f_lo = f(lo)?;
    if !(f_lo > 0.0) {
        return Err(Error::NoBoundState(format!(
            "λ ∫∫WG_EW stays below 1 (λ = {lambda} is not above threshold)"
        )));
    }
    let top = (KAPPA_MAX / a).ln();
    let (mut lo, mut f_lo) = (lo, f_lo);
    let mut hi = (1e-6 / a).ln();
    let mut f_hi = f(hi)?;
    while f_hi > 0.0 {
        if hi >= top {
            return Err(Error::NoBoundState(format!("no root for κ a in [{KAPPA_MIN:e}, {KAPPA_MAX:e}]")));
        }
        (lo, f_lo) = (hi, f_hi);
        hi = (hi + 2f64.ln()).min(top);
        f_hi = f(hi)?;
    }
    // the response falls monotonically with κ: one sign change in [lo, hi]
    if !(f_lo > 0.0 && f_hi <= 0.0) {
        return Err(Error::Bracket("separable response is not monotone in κ".into()));
    }
    let ln_k = brent_with_values(f, lo, hi, f_lo, f_hi, 1e-14)?;
    Ok(BoundStateResult::from_kappa(ln_k.exp(), Method::Separable))
}

/// Length scale used to bound the κ search: the rms radius of `|F|`.
fn range_scale(w: &WFunction) -> f64 {
    let r = w.grid.nodes();
    let f: Vec<f64> = r.iter().zip(&w.values).map(|(r, w)| (r * w).abs()).collect();
    let f3: Vec<f64> = r.iter().zip(&f).map(|(r, f)| r * r * f).collect();
    (w.grid.integral(&f3) / w.grid.integral(&f)).sqrt().max(f64::MIN_POSITIVE)
}
