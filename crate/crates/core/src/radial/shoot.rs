//! Outward integration of the s-wave equation and zero-energy shooting.
//!
//! With `t = ln r`, `P = r dΨ/dr` the radial equation in `2 + eps`
//! dimensions reads
//!
//! ```text
//! dΨ/dt = P,    dP/dt = -eps P + r² (λ v(r) - E) Ψ.
//! ```
//!
//! Beyond the potential at `E = 0` the solution is `c1 + c2 r^{-eps}`, so the
//! constant mode is read off pointwise as `c1 = Ψ + P/eps` (`Ψ - P ln r` in
//! two dimensions).

use serde::{Deserialize, Serialize};

use super::grid::RadialGrid;
use crate::error::{Error, Result};
use crate::ode::Stepper;
use crate::potentials::{moments, RadialPotential};
use crate::roots::brent;
use crate::specfun::unit_sphere_area;

pub(crate) const ODE_RTOL: f64 = 1e-13;
const RENORM_AT: f64 = 1e150;
const MAX_DOUBLINGS: usize = 60;
const MAX_LADDER: usize = 8;

/// Values of `Ψ` and `P = r Ψ'` on grid nodes `0..=end`.
pub(crate) struct Sweep {
    pub psi: Vec<f64>,
    pub dpsi: Vec<f64>,
    /// Sign changes of `Ψ` on `(r_first, r_end]`.
    pub sign_changes: usize,
}

impl Sweep {
    pub fn last(&self) -> (f64, f64) {
        (*self.psi.last().unwrap(), *self.dpsi.last().unwrap())
    }
}

/// Regular solution normalised to `Ψ → 1` at the origin, integrated from
/// the first node to node `end` at energy `energy`.
pub(crate) fn integrate_outward(
    p: &RadialPotential,
    eps: f64,
    lambda: f64,
    energy: f64,
    grid: &RadialGrid,
    end: usize,
) -> Result<Sweep> {
    let nodes = grid.nodes();
    let r0 = nodes[0];
    let (q, v0) = p.origin_coefficients();
    let c = lambda * q / (1.0 + eps);
    let d = (lambda * v0 - energy + lambda * q * c) / (2.0 * (2.0 + eps));
    let y0 = [1.0 + c * r0 + d * r0 * r0, c * r0 + 2.0 * d * r0 * r0];

    let mut psi = Vec::with_capacity(end + 1);
    let mut dpsi = Vec::with_capacity(end + 1);
    psi.push(y0[0]);
    dpsi.push(y0[1]);
    let mut stepper = Stepper::new(r0.ln(), y0, grid.segments()[0].2, ODE_RTOL);
    for &(i0, i1, _) in grid.segments() {
        if i0 >= end {
            break;
        }
        if i0 > 0 {
            // duplicated boundary node: the state is continuous across it
            psi.push(stepper.y[0]);
            dpsi.push(stepper.y[1]);
        }
        let (r_lo, r_hi) = (nodes[i0], nodes[i1]);
        let v_lo = p.value_side(r_lo, false);
        let v_hi = p.value_side(r_hi, true);
        let mut rhs = |t: f64, y: &[f64; 2]| {
            let r = t.exp();
            let v = if r <= r_lo {
                v_lo
            } else if r >= r_hi {
                v_hi
            } else {
                p.value(r)
            };
            [y[1], -eps * y[1] + r * r * (lambda * v - energy) * y[0]]
        };
        for &r in &nodes[i0 + 1..=i1.min(end)] {
            stepper.step_to(r.ln(), &mut rhs)?;
            let size = stepper.y[0].abs() + stepper.y[1].abs();
            if size > RENORM_AT {
                let s = 1.0 / size;
                stepper.rescale(s);
                psi.iter_mut().chain(dpsi.iter_mut()).for_each(|x| *x *= s);
            }
            psi.push(stepper.y[0]);
            dpsi.push(stepper.y[1]);
        }
    }
    Ok(Sweep {
        psi,
        dpsi,
        sign_changes: stepper.sign_changes,
    })
}

/// Outcome of one zero-energy integration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroEnergySolution {
    pub lambda: f64,
    pub eps: f64,
    /// `Ψ` on the grid, `Ψ(0) = 1`.
    pub psi: Vec<f64>,
    /// `r dΨ/dr` on the grid.
    pub dpsi: Vec<f64>,
    /// Coefficient of the constant mode of `Ψ` at large `r`.
    pub tail_constant: f64,
    /// Zeros of `Ψ` inside the grid.
    pub nodes: usize,
}

impl ZeroEnergySolution {
    /// Zeros of the exact zero-energy solution on `(0, inf)`: the interior
    /// ones plus one more if `Ψ` must still cross zero to reach `c1`.
    pub fn total_nodes(&self) -> usize {
        let last = *self.psi.last().unwrap();
        self.nodes + usize::from(self.tail_constant * last < 0.0)
    }
}

fn tail_constant(eps: f64, r: f64, psi: f64, dpsi: f64) -> f64 {
    if eps == 0.0 {
        psi - dpsi * r.ln()
    } else {
        psi + dpsi / eps
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps >= 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("eps must be finite and non-negative, got {eps}")))
    }
}

/// Integrates the zero-energy equation at coupling `lambda` across the grid.
pub fn integrate_zero_energy(
    p: &RadialPotential,
    eps: f64,
    lambda: f64,
    grid: &RadialGrid,
) -> Result<ZeroEnergySolution> {
    check_eps(eps)?;
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput(format!("coupling must be non-negative, got {lambda}")));
    }
    let sweep = integrate_outward(p, eps, lambda, 0.0, grid, grid.len() - 1)?;
    let (psi, dpsi) = sweep.last();
    Ok(ZeroEnergySolution {
        lambda,
        eps,
        tail_constant: tail_constant(eps, grid.r_max(), psi, dpsi),
        nodes: sweep.sign_changes,
        psi: sweep.psi,
        dpsi: sweep.dpsi,
    })
}

/// Critical couplings `λ_0 < λ_1 < ...`: `λ_n` is where the n-th excited
/// zero-energy state appears.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingSpectrum {
    pub lambdas: Vec<f64>,
}

struct Shooter<'a> {
    p: &'a RadialPotential,
    eps: f64,
    grid: &'a RadialGrid,
}

impl Shooter<'_> {
    fn solve(&self, lambda: f64) -> Result<ZeroEnergySolution> {
        integrate_zero_energy(self.p, self.eps, lambda, self.grid)
    }

    fn count(&self, lambda: f64) -> Result<usize> {
        Ok(self.solve(lambda)?.total_nodes())
    }

    /// `λ_n`, searching upwards from `start` where at most `n` nodes exist.
    fn lambda_n(&self, n: usize, start: f64, step: f64) -> Result<f64> {
        let mut lo = start;
        let mut hi = start + step;
        let mut found = false;
        for _ in 0..MAX_DOUBLINGS {
            if self.count(hi)? > n {
                found = true;
                break;
            }
            lo = hi;
            hi = lo + 2.0 * (hi - start);
        }
        if !found {
            return Err(Error::Bracket(format!("no critical coupling with {n} nodes below λ = {hi:e}")));
        }
        // narrow until the node count steps by exactly one across [lo, hi]
        for _ in 0..200 {
            let n_hi = self.count(hi)?;
            if n_hi == n + 1 && self.count(lo)? == n {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                return Err(Error::Bracket(format!("cannot isolate λ_{n} near {lo:e}")));
            }
            if self.count(mid)? > n {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        brent(|l| Ok(self.solve(l)?.tail_constant), lo, hi, 1e-14 * hi)
    }
}

fn initial_step(p: &RadialPotential, eps: f64) -> Result<f64> {
    let m1 = moments(p, 0.0)?.m1;
    Ok(0.25 * eps.max(1e-3) / m1.abs())
}

/// Zero-energy critical couplings `λ_0..=λ_{n_max}`.
pub fn coupling_spectrum(p: &RadialPotential, eps: f64, n_max: usize, grid: &RadialGrid) -> Result<CouplingSpectrum> {
    check_eps(eps)?;
    if eps == 0.0 {
        return Err(Error::UnsupportedDimension {
            eps,
            reason: "in two dimensions every attractive well binds, so λ_0 = 0",
        });
    }
    if n_max > MAX_LADDER {
        return Err(Error::InvalidInput(format!("n_max = {n_max} exceeds {MAX_LADDER}")));
    }
    let shooter = Shooter { p, eps, grid };
    let step = initial_step(p, eps)?;
    let mut lambdas: Vec<f64> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let start = lambdas.last().map_or(0.0, |l| l * (1.0 + 1e-9));
        let l = shooter.lambda_n(n, start, step.max(start * 0.25))?;
        lambdas.push(l);
    }
    Ok(CouplingSpectrum { lambdas })
}

/// Threshold state at the critical coupling, normalised so that
/// `sigma_eps int r^{1+eps} v ψ₀² dr = -1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroEnergyState {
    pub lambda_c: f64,
    pub eps: f64,
    /// `ψ₀` on the grid nodes.
    pub psi0: Vec<f64>,
    /// The normalisation integral re-evaluated independently (should be -1).
    pub norm_check: f64,
    pub grid: RadialGrid,
}

impl ZeroEnergyState {
    pub fn radii(&self) -> &[f64] {
        self.grid.nodes()
    }

    /// Normalises the zero-energy solution at `lambda_c`.
    pub fn from_solution(p: &RadialPotential, sol: &ZeroEnergySolution, grid: &RadialGrid) -> Result<Self> {
        let eps = sol.eps;
        let sigma = unit_sphere_area(eps);
        let v = grid.potential_values(p);
        let weight: Vec<f64> = grid
            .nodes()
            .iter()
            .zip(&v)
            .zip(&sol.psi)
            .map(|((r, v), psi)| sigma * r.powf(1.0 + eps) * v * psi * psi)
            .collect();
        let norm = grid.integral(&weight);
        if !(norm < 0.0) || !norm.is_finite() {
            return Err(Error::Degenerate(format!("normalisation integral {norm:e} is not negative")));
        }
        let s = 1.0 / (-norm).sqrt();
        let psi0: Vec<f64> = sol.psi.iter().map(|x| x * s).collect();
        let norm_check = grid.integral_simpson(&weight) * s * s;
        Ok(Self {
            lambda_c: sol.lambda,
            eps,
            psi0,
            norm_check,
            grid: grid.clone(),
        })
    }
}

/// Smallest coupling with a zero-energy bound state, and its wavefunction.
pub fn critical_coupling_shoot(p: &RadialPotential, eps: f64, grid: &RadialGrid) -> Result<ZeroEnergyState> {
    let spectrum = coupling_spectrum(p, eps, 0, grid)?;
    let sol = integrate_zero_energy(p, eps, spectrum.lambdas[0], grid)?;
    ZeroEnergyState::from_solution(p, &sol, grid)
}
