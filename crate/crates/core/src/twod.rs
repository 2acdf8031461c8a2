//! The two-dimensional limit: small-`eps` expansion of `λ_c`, the mean range,
//! the prefactor `C` of the exponential binding law, and bound states shared
//! between two distant centers.
//!
//! Planar integrals of radial profiles are reduced with the mean-value
//! property of the logarithm: the angular average of `ln|x - z|` over
//! `|x| = r` is `ln max(r, |z|)`.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::{moments, PotentialKind, RadialPotential};
use crate::quad;
use crate::radial::{BoundStateResult, Method};
use crate::specfun::EULER_GAMMA;

const QUAD_TOL: f64 = 1e-12;
const INNER_TOL: f64 = 1e-13;
const PAIR_TOL: f64 = 1e-11;
/// Default bound on `κ ā` beyond which the exponential law is not trusted.
pub const DEFAULT_GUARD: f64 = 0.1;

/// Small-`eps` data of a radial profile (all for unit depth).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoDAsymptotics {
    /// `λ_c ≈ λ₁ eps + λ₂ eps²`
    pub lambda1: f64,
    pub lambda2: f64,
    /// Mean range, `ln ā = ∫ r ln r v / ∫ r v`.
    pub a_bar: f64,
    /// `C = exp(ln 2 - γ - λ₂/λ₁) / ā`
    pub prefactor_c: f64,
}

impl TwoDAsymptotics {
    /// Two-term estimate of `λ_c` at `eps`.
    pub fn lambda_c_estimate(&self, eps: f64) -> f64 {
        self.lambda1 * eps + self.lambda2 * eps * eps
    }
}

/// `∫_0^∞ f(r, v(r)) dr` restricted to `r > lo`.
fn integrate_beyond<F: FnMut(f64, f64) -> f64>(p: &RadialPotential, lo: f64, mut f: F, tol: f64) -> Result<f64> {
    let bps = p.breakpoints();
    match p.support_radius() {
        Some(edge) if lo >= edge => Ok(0.0),
        Some(edge) => {
            let mut edges = vec![lo];
            edges.extend(bps.iter().copied().filter(|&b| b > lo && b < edge));
            edges.push(edge);
            quad::integrate_edges(|r| f(r, p.value(r)), &edges, tol)
        }
        None => quad::integrate_from(|r| f(r, p.value(r)), lo, p.range_a(), &bps, tol),
    }
}

/// `∫_0^hi f(r, v(r)) dr`.
fn integrate_below<F: FnMut(f64, f64) -> f64>(p: &RadialPotential, hi: f64, mut f: F, tol: f64) -> Result<f64> {
    let hi = p.support_radius().map_or(hi, |edge| hi.min(edge));
    quad::integrate_upto(|r| f(r, p.value(r)), hi, &p.breakpoints(), tol)
}

/// `∫∫ r r' v v' ln(r_>/r_<)`, split at the diagonal.
fn log_ratio_integral(p: &RadialPotential) -> Result<f64> {
    let mut err = None;
    let total = p.integrate(
        |r, v| {
            if r == 0.0 || v == 0.0 {
                return 0.0;
            }
            match integrate_below(p, r, |s, w| if s > 0.0 { s * w * (r / s).ln() } else { 0.0 }, INNER_TOL) {
                Ok(inner) => r * v * inner,
                Err(e) => {
                    err.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        QUAD_TOL,
    );
    match err {
        Some(e) => Err(e),
        None => Ok(2.0 * total?),
    }
}

/// `∫∫ r r' v v' ln r_>`, the radial form of the planar log self-energy
/// (without the `(2π)²`).
fn log_max_integral(p: &RadialPotential) -> Result<f64> {
    let mut err = None;
    let total = p.integrate(
        |r, v| {
            if r == 0.0 || v == 0.0 {
                return 0.0;
            }
            match integrate_below(p, r, |s, w| s * w, INNER_TOL) {
                Ok(inner) => r * v * r.ln() * inner,
                Err(e) => {
                    err.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        QUAD_TOL,
    );
    match err {
        Some(e) => Err(e),
        None => Ok(2.0 * total?),
    }
}

/// `λ₁`, `λ₂`, `ā` and `C` for the profile `p`.
pub fn epsilon_expansion(p: &RadialPotential) -> Result<TwoDAsymptotics> {
    let m = moments(p, 0.0)?;
    let lambda1 = -1.0 / m.m1;
    let lambda2 = -0.5 * log_ratio_integral(p)? / m.m1.powi(3);
    let a_bar = m.m_log.exp();
    let prefactor_c = (LN_2 - EULER_GAMMA - lambda2 / lambda1).exp() / a_bar;
    Ok(TwoDAsymptotics {
        lambda1,
        lambda2,
        a_bar,
        prefactor_c,
    })
}

/// One radial profile placed in the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Center {
    pub potential: RadialPotential,
    pub position: [f64; 2],
    pub depth: f64,
}

/// `V(x) = Σ depth_i v_i(|x - c_i|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarPotential {
    pub centers: Vec<Center>,
}

impl PlanarPotential {
    pub fn single(potential: RadialPotential) -> Self {
        Self {
            centers: vec![Center {
                potential,
                position: [0.0, 0.0],
                depth: 1.0,
            }],
        }
    }

    /// Two unit-depth copies of `v` a distance `r_sep` apart.
    pub fn two_center(v: &RadialPotential, r_sep: f64) -> Result<Self> {
        if !(r_sep >= 0.0 && r_sep.is_finite()) {
            return Err(Error::InvalidInput(format!("separation must be non-negative, got {r_sep}")));
        }
        let c = |x: f64| Center {
            potential: v.clone(),
            position: [x, 0.0],
            depth: 1.0,
        };
        Ok(Self {
            centers: vec![c(-0.5 * r_sep), c(0.5 * r_sep)],
        })
    }

    pub fn translated(&self, shift: [f64; 2]) -> Self {
        let mut out = self.clone();
        for c in &mut out.centers {
            c.position[0] += shift[0];
            c.position[1] += shift[1];
        }
        out
    }

    /// `∫ V d²r`.
    pub fn area_integral(&self) -> Result<f64> {
        let mut s = 0.0;
        for c in &self.centers {
            s += c.depth * 2.0 * PI * moments(&c.potential, 0.0)?.m1;
        }
        Ok(s)
    }

    /// Radius of the smallest disc about the centroid holding every center,
    /// widened by the largest mean range.
    pub fn extent(&self) -> Result<f64> {
        let n = self.centers.len() as f64;
        let cx = self.centers.iter().map(|c| c.position[0]).sum::<f64>() / n;
        let cy = self.centers.iter().map(|c| c.position[1]).sum::<f64>() / n;
        let mut reach = 0.0f64;
        let mut range = 0.0f64;
        for c in &self.centers {
            reach = reach.max((c.position[0] - cx).hypot(c.position[1] - cy));
            range = range.max(moments(&c.potential, 0.0)?.m_log.exp());
        }
        Ok(reach + range)
    }
}

/// `∫∫ v_i(|x|) v_j(|y|) ln|x - y - d| d²x d²y` with `|d| = dist`.
///
/// The field of center `i` is `2π m1_i ln s + χ_i(s)` with
/// `χ_i(s) = 2π ∫_s^∞ r v_i (ln r - ln s) dr`. The logarithmic part
/// averages exactly over center `j`; the short-range remainder is integrated
/// in polar coordinates about center `i`, where `s ds` tames the log.
fn pair_log_integral(vi: &RadialPotential, vj: &RadialPotential, dist: f64) -> Result<f64> {
    let m1_i = moments(vi, 0.0)?.m1;
    let far = if dist > 0.0 {
        integrate_below(vj, dist, |r, v| r * v * dist.ln(), PAIR_TOL)?
            + integrate_beyond(vj, dist, |r, v| r * v * r.ln(), PAIR_TOL)?
    } else {
        vj.integrate(|r, v| if r > 0.0 { r * v * r.ln() } else { 0.0 }, PAIR_TOL)?
    };
    let smooth = 4.0 * PI * PI * m1_i * far;

    let chi = |s: f64| -> Result<f64> {
        Ok(2.0 * PI * integrate_beyond(vi, s, |r, v| r * v * (r / s).ln(), PAIR_TOL)?)
    };
    // 2 ∫_0^π v_j(|s e_θ - d|) dθ
    let ring = |s: f64| -> Result<f64> {
        if dist == 0.0 {
            return Ok(2.0 * PI * vj.value(s));
        }
        let rho = |th: f64| (s * s + dist * dist - 2.0 * s * dist * th.cos()).max(0.0).sqrt();
        let mut edges = vec![0.0];
        for b in vj.breakpoints() {
            let c = (s * s + dist * dist - b * b) / (2.0 * s * dist);
            if c > -1.0 && c < 1.0 {
                edges.push(c.acos());
            }
        }
        edges.push(PI);
        edges.sort_by(f64::total_cmp);
        Ok(2.0 * quad::integrate_edges(|th| vj.value(rho(th)), &edges, PAIR_TOL)?)
    };

    let mut bps: Vec<f64> = vi.breakpoints();
    for b in vj.breakpoints() {
        bps.extend([dist - b, dist + b].into_iter().filter(|&x| x > 0.0));
    }
    if dist > 0.0 {
        bps.push(dist);
    }
    let mut err = None;
    let mut body = |s: f64| {
        if s == 0.0 {
            return 0.0;
        }
        match chi(s).and_then(|c| Ok(if c == 0.0 { 0.0 } else { c * ring(s)? })) {
            Ok(x) => s * x,
            Err(e) => {
                err.get_or_insert(e);
                f64::NAN
            }
        }
    };
    let local = match vi.support_radius() {
        Some(edge) => quad::integrate_upto(&mut body, edge, &bps, PAIR_TOL),
        None => quad::integrate_radial(&mut body, vi.range_a(), &bps, PAIR_TOL),
    };
    if let Some(e) = err {
        return Err(e);
    }
    Ok(smooth + local?)
}

/// `C = exp(ln 2 - γ - ∫∫ V V' ln|r - r'| / (∫V)²)` evaluated in the plane.
pub fn prefactor_c_direct(v: &PlanarPotential) -> Result<f64> {
    if v.centers.is_empty() {
        return Err(Error::InvalidInput("no centers".into()));
    }
    let total = v.area_integral()?;
    let scale: f64 = v.centers.iter().map(|c| c.depth.abs()).sum();
    if !(total.abs() > 1e-300 * scale) {
        return Err(Error::Degenerate("∫V vanishes".into()));
    }
    let mut log_energy = 0.0;
    for (i, ci) in v.centers.iter().enumerate() {
        log_energy += ci.depth * ci.depth * 4.0 * PI * PI * log_max_integral(&ci.potential)?;
        for cj in &v.centers[i + 1..] {
            let d = (cj.position[0] - ci.position[0]).hypot(cj.position[1] - ci.position[1]);
            log_energy += 2.0 * ci.depth * cj.depth * pair_log_integral(&ci.potential, &cj.potential, d)?;
        }
    }
    Ok((LN_2 - EULER_GAMMA - log_energy / (total * total)).exp())
}

/// `κ = C exp(-2π / (λ |∫V|))` for a single radial center, refused when
/// `κ ā >= guard`.
pub fn binding_energy_2d_with_guard(p: &RadialPotential, lambda: f64, guard: f64) -> Result<BoundStateResult> {
    let t = epsilon_expansion(p)?;
    let area = 2.0 * PI * moments(p, 0.0)?.m1.abs();
    exponential_law(t.prefactor_c, area, t.a_bar, lambda, guard)
}

/// [`binding_energy_2d_with_guard`] with [`DEFAULT_GUARD`].
pub fn binding_energy_2d(p: &RadialPotential, lambda: f64) -> Result<BoundStateResult> {
    binding_energy_2d_with_guard(p, lambda, DEFAULT_GUARD)
}

/// Exponential law for a planar potential with `C` from the direct planar
/// integral; the guard applies to `κ` times [`PlanarPotential::extent`].
pub fn binding_energy_planar(v: &PlanarPotential, lambda: f64, guard: f64) -> Result<BoundStateResult> {
    let c = prefactor_c_direct(v)?;
    exponential_law(c, v.area_integral()?.abs(), v.extent()?, lambda, guard)
}

fn exponential_law(c: f64, area: f64, size: f64, lambda: f64, guard: f64) -> Result<BoundStateResult> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput(format!("coupling must be positive, got {lambda}")));
    }
    let kappa = c * (-2.0 * PI / (lambda * area)).exp();
    if !(kappa * size < guard) {
        return Err(Error::ValidityGuard(format!(
            "κ ā = {:.3e} is not below {guard} at λ = {lambda}",
            kappa * size
        )));
    }
    Ok(BoundStateResult::from_kappa(kappa, Method::TwodAsymptote))
}

/// Shared bound state of two identical centers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoCenterResult {
    /// Single-center `κ`.
    pub kappa0: f64,
    pub separation_r: f64,
    pub energy_e2: f64,
}

/// `E₂ = -2 e^{-γ} κ₀ / R`, meant for `a << R << 1/κ₀`; the regime is the
/// caller's business.
pub fn two_center_energy(kappa0: f64, r_sep: f64) -> Result<TwoCenterResult> {
    if !(kappa0 > 0.0 && kappa0.is_finite()) || !(r_sep > 0.0 && r_sep.is_finite()) {
        return Err(Error::InvalidInput(format!("need κ₀ > 0 and R > 0, got κ₀ = {kappa0}, R = {r_sep}")));
    }
    Ok(TwoCenterResult {
        kappa0,
        separation_r: r_sep,
        energy_e2: -two_center_prefactor() * kappa0 / r_sep,
    })
}

/// `2 e^{-γ}`
pub fn two_center_prefactor() -> f64 {
    2.0 * (-EULER_GAMMA).exp()
}

/// Closed forms `(λ₁a², λ₂a², ā/a, C a)` for the catalog profiles.
pub fn closed_form(kind: PotentialKind) -> Option<[f64; 4]> {
    let g = EULER_GAMMA;
    match kind {
        PotentialKind::Exponential => Some([1.0, LN_2 - 0.25, (1.0 - g).exp(), (-0.75f64).exp()]),
        PotentialKind::SquareWell => Some([2.0, 0.5, (-0.5f64).exp(), 2.0 * (0.25 - g).exp()]),
        PotentialKind::YukawaLike => Some([1.0, LN_2, (-g).exp(), 1.0]),
        PotentialKind::Gaussian => Some([2.0, LN_2, (-0.5 * g).exp(), 2f64.sqrt() * (-0.5 * g).exp()]),
        PotentialKind::Tabulated => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub kind: PotentialKind,
    /// `(λ₁a², λ₂a², ā/a, C a)` by quadrature
    pub computed: [f64; 4],
    pub closed_form: [f64; 4],
    /// `C a` from the planar log integral
    pub c_direct: f64,
}

impl TableRow {
    pub fn rel_errors(&self) -> [f64; 4] {
        std::array::from_fn(|k| ((self.computed[k] - self.closed_form[k]) / self.closed_form[k]).abs())
    }

    pub fn max_rel_error(&self) -> f64 {
        self.rel_errors().into_iter().fold(0.0, f64::max)
    }
}

/// All four catalog rows at `a = 1`.
pub fn table1() -> Result<Vec<TableRow>> {
    PotentialKind::CATALOG
        .iter()
        .map(|&kind| {
            let p = crate::potentials::make_catalog_potential(kind, 1.0)?;
            let t = epsilon_expansion(&p)?;
            Ok(TableRow {
                kind,
                computed: [t.lambda1, t.lambda2, t.a_bar, t.prefactor_c],
                closed_form: closed_form(kind).unwrap(),
                c_direct: prefactor_c_direct(&PlanarPotential::single(p))?,
            })
        })
        .collect()
}
