//! Bound states by matching the interior solution to the decaying exterior
//! `r^{-eps/2} K_{eps/2}(κ r)` at a radius where the potential is negligible.

use serde::{Deserialize, Serialize};

use super::grid::RadialGrid;
use super::shoot::{integrate_outward, integrate_zero_energy};
use crate::error::{Error, Result};
use crate::potentials::RadialPotential;
use crate::roots::brent;
use crate::specfun::bessel_ik_scaled;

/// The potential counts as negligible where `λ|v| < MATCH_FRACTION κ²`.
pub const MATCH_FRACTION: f64 = 1e-10;
/// Relative size of the tail constant below which `λ` is taken to sit at
/// the threshold itself.
const THRESHOLD_TAIL: f64 = 1e-9;
const KAPPA_FLOOR: f64 = 1e-100;

/// How a binding energy was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Direct,
    Separable,
    NearThreshold,
    TwodAsymptote,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundStateResult {
    pub energy: f64,
    pub kappa: f64,
    pub method: Method,
    /// `Ψ` on the grid nodes with `Ψ(0) = 1`, when available.
    pub wavefunction: Option<Vec<f64>>,
}

impl BoundStateResult {
    pub fn from_kappa(kappa: f64, method: Method) -> Self {
        Self {
            energy: -(kappa * kappa),
            kappa,
            method,
            wavefunction: None,
        }
    }
}

struct Match {
    /// Normalised mismatch `(P - Ψ L) / (|(Ψ, P)| |(1, L)|)`.
    d: f64,
    /// Eigenvalues with `κ_n > κ`.
    count: usize,
    interior_nodes: usize,
}

struct Matcher<'a> {
    p: &'a RadialPotential,
    eps: f64,
    lambda: f64,
    grid: &'a RadialGrid,
}

impl Matcher<'_> {
    /// First node beyond which `λ|v| < MATCH_FRACTION κ²` everywhere.
    fn index(&self, kappa: f64) -> Option<usize> {
        let nodes = self.grid.nodes();
        if let Some(edge) = self.p.support_radius() {
            return self.grid.index_at_or_after(edge);
        }
        let limit = MATCH_FRACTION * kappa * kappa;
        let last_big = (0..nodes.len()).rev().find(|&i| self.lambda * self.p.value(nodes[i]).abs() >= limit)?;
        (last_big + 1 < nodes.len()).then_some(last_big + 1)
    }

    fn eval(&self, kappa: f64, m: usize) -> Result<Match> {
        let sweep = integrate_outward(self.p, self.eps, self.lambda, -kappa * kappa, self.grid, m)?;
        let (psi, dpsi) = sweep.last();
        let nu = 0.5 * self.eps;
        let x = kappa * self.grid.nodes()[m];
        let ik = bessel_ik_scaled(nu, x);
        let l_ext = -nu + x * ik.kp / ik.k;
        let mismatch = dpsi - psi * l_ext;
        Ok(Match {
            d: mismatch / (psi.hypot(dpsi) * 1f64.hypot(l_ext)),
            count: sweep.sign_changes + usize::from(mismatch * psi < 0.0),
            interior_nodes: sweep.sign_changes,
        })
    }

    fn eval_clamped(&self, kappa: f64) -> Result<Match> {
        let m = self.index(kappa).unwrap_or(self.grid.len() - 1);
        self.eval(kappa, m)
    }
}

/// Ground-state energy at coupling `lambda` from the ODE solver.
pub fn bound_state_direct(p: &RadialPotential, eps: f64, lambda: f64, grid: &RadialGrid) -> Result<BoundStateResult> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::InvalidInput(format!("eps must be finite and non-negative, got {eps}")));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::NoBoundState(format!("coupling {lambda} is not positive")));
    }
    if eps > 0.0 {
        let zero = integrate_zero_energy(p, eps, lambda, grid)?;
        if zero.total_nodes() == 0 {
            return Err(Error::NoBoundState(format!("λ = {lambda} lies below the critical coupling")));
        }
        let scale = zero.psi.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if zero.tail_constant.abs() < THRESHOLD_TAIL * scale {
            return Err(Error::NoBoundState(format!("λ = {lambda} sits at the critical coupling (E = 0)")));
        }
    }
    let mm = Matcher { p, eps, lambda, grid };
    let a = p.range_a();

    let mut hi = 1.0 / a;
    let mut tries = 0;
    while mm.eval_clamped(hi)?.count > 0 {
        hi *= 2.0;
        tries += 1;
        if tries > 200 {
            return Err(Error::Bracket("no upper bound on κ".into()));
        }
    }
    let mut lo = 0.25 * hi;
    while mm.eval_clamped(lo)?.count == 0 {
        hi = lo;
        lo *= 0.25;
        if lo < KAPPA_FLOOR / a {
            return Err(Error::NoBoundState(format!("no bound state with κ a > {KAPPA_FLOOR:e}")));
        }
    }

    // Narrow [lo, hi] until the interior solution at lo is nodeless, then
    // fix the matching radius from the lower end and refine.
    let mut fixed: Option<usize> = None;
    loop {
        let eval = |k: f64| match fixed {
            Some(m) => mm.eval(k, m),
            None => mm.eval_clamped(k),
        };
        let at_lo = eval(lo)?;
        if at_lo.count >= 1 && at_lo.interior_nodes == 0 && eval(hi)?.count == 0 {
            if fixed.is_some() {
                break;
            }
            let m = mm.index(0.5 * lo).ok_or(Error::MatchingRadius {
                r_match: f64::INFINITY,
                r_max: grid.r_max(),
            })?;
            fixed = Some(m);
            continue;
        }
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            return Err(Error::Bracket(format!("cannot isolate the ground state near κ = {lo:e}")));
        }
        if eval(mid)?.count == 0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let m = fixed.unwrap();
    let ln_k = brent(|lk| Ok(mm.eval(lk.exp(), m)?.d), lo.ln(), hi.ln(), 1e-14)?;
    let kappa = ln_k.exp();

    let sweep = integrate_outward(p, eps, lambda, -kappa * kappa, grid, m)?;
    let nodes = grid.nodes();
    let nu = 0.5 * eps;
    let rm = nodes[m];
    let km = bessel_ik_scaled(nu, kappa * rm).k;
    let psi_m = *sweep.psi.last().unwrap();
    let mut wf = sweep.psi;
    wf.extend(nodes[m + 1..].iter().map(|&r| {
        let k = bessel_ik_scaled(nu, kappa * r).k;
        psi_m * (r / rm).powf(-nu) * (k / km) * (-kappa * (r - rm)).exp()
    }));
    let mut out = BoundStateResult::from_kappa(kappa, Method::Direct);
    out.wavefunction = Some(wf);
    Ok(out)
}
