//! Attractive short-range radial profiles `v(r) <= 0` of unit depth and their
//! radial moments.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;
use crate::specfun::unit_sphere_area;

const MOMENT_TOL: f64 = 1e-12;
/// Tabulated tails must fall off faster than `r^-(2 + TAIL_DELTA)`.
pub const TAIL_DELTA: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    /// `-exp(-r/a)`
    Exponential,
    /// `-θ(a - r)`
    SquareWell,
    /// `-(a/r) exp(-r/a)`
    YukawaLike,
    /// `-exp(-r²/a²)`
    Gaussian,
    Tabulated,
}

impl PotentialKind {
    pub const CATALOG: [PotentialKind; 4] = [
        PotentialKind::Exponential,
        PotentialKind::SquareWell,
        PotentialKind::YukawaLike,
        PotentialKind::Gaussian,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PotentialKind::Exponential => "exponential",
            PotentialKind::SquareWell => "square_well",
            PotentialKind::YukawaLike => "yukawa_like",
            PotentialKind::Gaussian => "gaussian",
            PotentialKind::Tabulated => "tabulated",
        }
    }
}

impl fmt::Display for PotentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PotentialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "exponential" | "exp" => Ok(PotentialKind::Exponential),
            "square_well" | "square" => Ok(PotentialKind::SquareWell),
            "yukawa_like" | "yukawa" => Ok(PotentialKind::YukawaLike),
            "gaussian" | "gauss" => Ok(PotentialKind::Gaussian),
            "tabulated" | "table" => Ok(PotentialKind::Tabulated),
            _ => Err(Error::UnknownKind(s.to_string())),
        }
    }
}

/// Monotone cubic Hermite interpolant. When every sample is strictly
/// negative the interpolation runs on `ln|v|`, which is exact for
/// exponential tails and keeps the sign.
#[derive(Debug, Clone, PartialEq)]
struct Table {
    r: Vec<f64>,
    y: Vec<f64>,
    slope: Vec<f64>,
    log: bool,
}

impl Table {
    fn new(r: Vec<f64>, v: Vec<f64>) -> Self {
        let log = v.iter().all(|&x| x < 0.0);
        let y: Vec<f64> = if log { v.iter().map(|x| (-x).ln()).collect() } else { v };
        let slope = pchip_slopes(&r, &y);
        Self { r, y, slope, log }
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.r.len();
        let raw = if x <= self.r[0] {
            self.y[0]
        } else if x >= self.r[n - 1] {
            self.y[n - 1]
        } else {
            let k = self.r.partition_point(|&ri| ri <= x) - 1;
            let h = self.r[k + 1] - self.r[k];
            let t = (x - self.r[k]) / h;
            let (t2, t3) = (t * t, t * t * t);
            (2.0 * t3 - 3.0 * t2 + 1.0) * self.y[k]
                + (t3 - 2.0 * t2 + t) * h * self.slope[k]
                + (-2.0 * t3 + 3.0 * t2) * self.y[k + 1]
                + (t3 - t2) * h * self.slope[k + 1]
        };
        if self.log {
            -raw.exp()
        } else {
            raw.min(0.0)
        }
    }
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    let mut m = vec![0.0; n];
    for k in 1..n - 1 {
        if d[k - 1] * d[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s.signum() != d0.signum() {
            0.0
        } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            s
        }
    };
    m[0] = end(h[0], h[1], d[0], d[1]);
    m[n - 1] = end(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    m
}

#[derive(Debug, Clone, PartialEq)]
enum Profile {
    Analytic,
    Table(Table),
}

/// A radial profile of unit depth with range `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialPotential {
    kind: PotentialKind,
    range_a: f64,
    profile: Profile,
}

impl RadialPotential {
    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    pub fn range_a(&self) -> f64 {
        self.range_a
    }

    /// `v(r)`. At a discontinuity the inner value is returned.
    pub fn value(&self, r: f64) -> f64 {
        self.value_side(r, true)
    }

    /// `v` at `r`, taking the limit from the inside (`inner = true`) or the
    /// outside at a breakpoint.
    pub fn value_side(&self, r: f64, inner: bool) -> f64 {
        let a = self.range_a;
        match (&self.profile, self.kind) {
            (Profile::Table(t), _) => {
                let last = *t.r.last().unwrap();
                if r > last || (r == last && !inner) {
                    0.0
                } else {
                    t.eval(r)
                }
            }
            (_, PotentialKind::Exponential) => -(-r / a).exp(),
            (_, PotentialKind::SquareWell) => {
                if r < a || (r == a && inner) {
                    -1.0
                } else {
                    0.0
                }
            }
            (_, PotentialKind::YukawaLike) => -(a / r) * (-r / a).exp(),
            (_, PotentialKind::Gaussian) => -(-(r / a).powi(2)).exp(),
            (_, PotentialKind::Tabulated) => unreachable!("tabulated kind always carries a table"),
        }
    }

    /// Radii where `v` or its derivatives jump (quadrature breakpoints and
    /// forced grid nodes).
    pub fn breakpoints(&self) -> Vec<f64> {
        match (&self.profile, self.kind) {
            (Profile::Table(t), _) => t.r.iter().copied().filter(|&r| r > 0.0).collect(),
            (_, PotentialKind::SquareWell) => vec![self.range_a],
            _ => Vec::new(),
        }
    }

    /// Radii where `v` itself is discontinuous.
    pub fn discontinuities(&self) -> Vec<f64> {
        match (&self.profile, self.kind) {
            (Profile::Table(t), _) => vec![*t.r.last().unwrap()],
            (_, PotentialKind::SquareWell) => vec![self.range_a],
            _ => Vec::new(),
        }
    }

    /// Radius beyond which `v` vanishes identically, if any.
    pub fn support_radius(&self) -> Option<f64> {
        match (&self.profile, self.kind) {
            (Profile::Table(t), _) => t.r.last().copied(),
            (_, PotentialKind::SquareWell) => Some(self.range_a),
            _ => None,
        }
    }

    /// `(q, v0)` with `v(r) = q/r + v0 + O(r)` near the origin.
    pub fn origin_coefficients(&self) -> (f64, f64) {
        match (&self.profile, self.kind) {
            (Profile::Table(t), _) => (0.0, t.eval(0.0)),
            (_, PotentialKind::YukawaLike) => (-self.range_a, 1.0),
            _ => (0.0, self.value(0.0)),
        }
    }

    /// The same profile stretched to range `s * a`: `v_s(r) = v(r / s)`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidInput(format!("scale factor must be positive, got {s}")));
        }
        Ok(match &self.profile {
            Profile::Table(t) => {
                let r = t.r.iter().map(|r| r * s).collect::<Vec<_>>();
                let v = (0..t.r.len()).map(|i| t.eval(t.r[i])).collect::<Vec<_>>();
                let mut p = build_tabulated(r, v)?;
                p.range_a = self.range_a * s;
                p
            }
            Profile::Analytic => Self {
                kind: self.kind,
                range_a: self.range_a * s,
                profile: Profile::Analytic,
            },
        })
    }

    /// `int_0^inf f(r, v(r)) dr` with breakpoints and grading suited to `v`.
    pub fn integrate<F: FnMut(f64, f64) -> f64>(&self, mut f: F, rel_tol: f64) -> Result<f64> {
        let a = self.range_a;
        match self.support_radius() {
            Some(edge) => {
                let edges = quad::edges_upto(edge, &self.breakpoints());
                quad::integrate_edges(|r| f(r, self.value(r)), &edges, rel_tol)
            }
            None => quad::integrate_radial(|r| f(r, self.value(r)), a, &self.breakpoints(), rel_tol),
        }
    }
}

/// One of the four unit-depth catalog profiles, or the square well.
pub fn make_catalog_potential(kind: PotentialKind, a: f64) -> Result<RadialPotential> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidPotential(format!("range must be positive, got {a}")));
    }
    if kind == PotentialKind::Tabulated {
        return Err(Error::InvalidPotential("tabulated profiles are built with load_tabulated".into()));
    }
    Ok(RadialPotential {
        kind,
        range_a: a,
        profile: Profile::Analytic,
    })
}

/// Tabulated profile from `(r, v)` samples; `v` is held at its first value
/// below the first radius and vanishes beyond the last.
pub fn load_tabulated(points: &[(f64, f64)]) -> Result<RadialPotential> {
    let (r, v): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
    build_tabulated(r, v)
}

fn build_tabulated(r: Vec<f64>, v: Vec<f64>) -> Result<RadialPotential> {
    if r.len() < 4 {
        return Err(Error::InvalidPotential(format!("need at least 4 points, got {}", r.len())));
    }
    if r.iter().chain(&v).any(|x| !x.is_finite()) {
        return Err(Error::InvalidPotential("non-finite entry".into()));
    }
    if r[0] < 0.0 {
        return Err(Error::InvalidPotential("radii must be non-negative".into()));
    }
    if let Some(w) = r.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidPotential(format!("radii not strictly increasing at r = {}", w[1])));
    }
    if let Some((ri, vi)) = r.iter().zip(&v).find(|(_, &vi)| vi > 0.0) {
        return Err(Error::InvalidPotential(format!("repulsive value v({ri}) = {vi}")));
    }
    if v.iter().all(|&x| x == 0.0) {
        return Err(Error::InvalidPotential("profile vanishes identically".into()));
    }
    check_tail(&r, &v)?;
    let table = Table::new(r, v);
    let mut p = RadialPotential {
        kind: PotentialKind::Tabulated,
        range_a: 1.0,
        profile: Profile::Table(table),
    };
    let edge = p.support_radius().unwrap();
    let edges = quad::edges_upto(edge, &p.breakpoints());
    let m1 = quad::integrate_edges(|x| x * p.value(x).abs(), &edges, MOMENT_TOL)?;
    let m3 = quad::integrate_edges(|x| x.powi(3) * p.value(x).abs(), &edges, MOMENT_TOL)?;
    // rms radius of the weight r|v| serves as the range scale
    p.range_a = (m3 / m1).sqrt();
    Ok(p)
}

fn check_tail(r: &[f64], v: &[f64]) -> Result<()> {
    let last = *r.last().unwrap();
    let idx: Vec<usize> = (0..r.len()).filter(|&i| r[i] >= 0.1 * last && r[i] > 0.0).collect();
    if idx.len() < 2 {
        return Ok(());
    }
    let w = |i: usize| r[i].powf(2.0 + TAIL_DELTA) * v[i].abs();
    let first = w(idx[0]);
    let end = w(*idx.last().unwrap());
    if end > first && end > 0.0 {
        return Err(Error::InvalidPotential(format!(
            "tail decays no faster than r^-{}: r^{}|v| grows from {first:e} to {end:e} over the last decade",
            2.0 + TAIL_DELTA,
            2.0 + TAIL_DELTA
        )));
    }
    Ok(())
}

/// Radial moments of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    /// `int r ln r v / int r v`
    pub m_log: f64,
    /// `int r v`
    pub m1: f64,
    /// `sigma_eps int r^{1+eps} v`, the volume integral of `V` in `2 + eps` dimensions.
    pub vol_integral: f64,
}

pub fn moments(p: &RadialPotential, eps: f64) -> Result<Moments> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::InvalidInput(format!("eps must be non-negative, got {eps}")));
    }
    let m1 = p.integrate(|r, v| r * v, MOMENT_TOL)?;
    let mlog = p.integrate(|r, v| if r > 0.0 { r * r.ln() * v } else { 0.0 }, MOMENT_TOL)?;
    let vol = p.integrate(|r, v| r.powf(1.0 + eps) * v, MOMENT_TOL)?;
    if !(m1 < 0.0) {
        return Err(Error::InvalidPotential("profile has no attractive weight".into()));
    }
    Ok(Moments {
        m_log: mlog / m1,
        m1,
        vol_integral: unit_sphere_area(eps) * vol,
    })
}
