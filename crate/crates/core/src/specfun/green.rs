//! Free-particle Green's functions of `-Δ - E` in `2 + eps` dimensions.

use std::f64::consts::PI;

use super::bessel::{bessel_ik_scaled, BESSEL_ARG_MAX};
use super::gamma::{gamma_fn, unit_sphere_area};
use crate::error::{Error, Result};

/// Dimension and energy parameters shared by the Green's functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenParams {
    pub epsilon: f64,
    /// `sqrt(-E)`, zero at threshold.
    pub kappa: f64,
    /// Area of the unit sphere in `2 + eps` dimensions.
    pub sigma_eps: f64,
}

impl GreenParams {
    pub fn new(epsilon: f64, kappa: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 4.0) {
            return Err(Error::Domain {
                func: "GreenParams",
                arg: epsilon,
                reason: "eps must lie in (0, 4)",
            });
        }
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(Error::Domain {
                func: "GreenParams",
                arg: kappa,
                reason: "kappa must be finite and non-negative",
            });
        }
        Ok(Self {
            epsilon,
            kappa,
            sigma_eps: unit_sphere_area(epsilon),
        })
    }

    fn nu(&self) -> f64 {
        0.5 * self.epsilon
    }

    /// Full Green's function at separation `r`.
    pub fn full(&self, r: f64) -> Result<f64> {
        check_radius("green", r)?;
        if self.kappa == 0.0 {
            return Ok(r.powf(-self.epsilon) / (self.epsilon * self.sigma_eps));
        }
        let x = self.kappa * r;
        if x > BESSEL_ARG_MAX {
            return Err(Error::Underflow {
                func: "green_e",
                arg: x,
            });
        }
        let nu = self.nu();
        let k = bessel_ik_scaled(nu, x).k * (-x).exp();
        Ok((2.0 * PI).powf(-(1.0 + nu)) * (self.kappa / r).powf(nu) * k)
    }

    /// s-wave (angular-averaged) Green's function between radii `r` and `rp`.
    pub fn swave(&self, r: f64, rp: f64) -> Result<f64> {
        check_radius("swave_green_e", r)?;
        check_radius("swave_green_e", rp)?;
        let (lo, hi) = if r < rp { (r, rp) } else { (rp, r) };
        if self.kappa == 0.0 {
            return Ok(hi.powf(-self.epsilon) / (self.epsilon * self.sigma_eps));
        }
        let nu = self.nu();
        let i = bessel_ik_scaled(nu, self.kappa * lo).i;
        let k = bessel_ik_scaled(nu, self.kappa * hi).k;
        Ok((r * rp).powf(-nu) * i * k * (self.kappa * (lo - hi)).exp() / self.sigma_eps)
    }
}

fn check_radius(func: &'static str, r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            func,
            arg: r,
            reason: "radius must be positive and finite",
        })
    }
}

/// Zero-energy Green's function `r^{-eps} / (eps sigma_eps)`.
pub fn green_zero(eps: f64, r: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::Domain {
            func: "green_zero",
            arg: eps,
            reason: "eps must be positive",
        });
    }
    check_radius("green_zero", r)?;
    Ok(r.powf(-eps) / (eps * unit_sphere_area(eps)))
}

/// Bound-state Green's function `(2pi)^{-(1+eps/2)} (kappa/r)^{eps/2} K_{eps/2}(kappa r)`.
pub fn green_e(eps: f64, kappa: f64, r: f64) -> Result<f64> {
    if !(kappa > 0.0) {
        return Err(Error::Domain {
            func: "green_e",
            arg: kappa,
            reason: "kappa must be positive",
        });
    }
    GreenParams::new(eps, kappa)?.full(r)
}

/// Leading small-`|E|` term of `G_E - G_0`, valid for `0 < eps < 2`.
pub fn delta_green_leading(eps: f64, energy: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 2.0) {
        return Err(Error::UnsupportedDimension {
            eps,
            reason: "leading-order expansion of G_E - G_0 requires 0 < eps < 2",
        });
    }
    if !(energy < 0.0) {
        return Err(Error::Domain {
            func: "delta_green_leading",
            arg: energy,
            reason: "energy must be negative",
        });
    }
    let g = gamma_fn(1.0 - 0.5 * eps)?;
    Ok(-(g / (2.0 * eps * PI)) * (-energy / (4.0 * PI)).powf(0.5 * eps))
}

/// s-wave projection of `G_E` between radii `r` and `rp` (`kappa = 0` allowed).
pub fn swave_green_e(eps: f64, kappa: f64, r: f64, rp: f64) -> Result<f64> {
    GreenParams::new(eps, kappa)?.swave(r, rp)
}
