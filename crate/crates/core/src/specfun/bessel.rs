//! Modified Bessel functions `I_nu` and `K_nu` of real order.
//!
//! Temme's series handles `x < 2`, Steed's continued fraction handles
//! `x >= 2`; `K` is carried up from the fractional order by forward
//! recurrence and `I` follows from the Wronskian with a continued fraction
//! for `I'/I`. Neither branch uses the `I_{-nu} - I_nu` difference, so
//! orders close to an integer need no special casing.

use std::f64::consts::PI;

use super::gamma::{gamma_fn, temme_gammas};
use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-290;
const MAXIT: usize = 100_000;
const TEMME_XMAX: f64 = 2.0;

/// Largest argument accepted by the unscaled public functions.
pub const BESSEL_ARG_MAX: f64 = 700.0;
/// Smallest argument accepted by [`bessel_k`].
pub const BESSEL_K_ARG_MIN: f64 = 1e-12;

/// Order of a modified Bessel function, restricted to `0 < nu < 3`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if nu > 0.0 && nu < 3.0 {
            Ok(Self(nu))
        } else {
            Err(Error::Domain {
                func: "BesselOrder",
                arg: nu,
                reason: "order must lie in (0, 3)",
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Exponentially scaled values: `i`, `ip` carry a factor `e^{-x}`,
/// `k`, `kp` carry `e^{x}`.
#[derive(Debug, Clone, Copy)]
pub struct ScaledIK {
    pub i: f64,
    pub ip: f64,
    pub k: f64,
    pub kp: f64,
}

/// `I_nu`, `K_nu` and their derivatives, exponentially scaled.
/// Requires `nu >= 0` and `x > 0`.
pub(crate) fn bessel_ik_scaled(nu: f64, x: f64) -> ScaledIK {
    debug_assert!(nu >= 0.0 && x > 0.0);
    let nl = (nu + 0.5).floor() as usize;
    let xmu = nu - nl as f64;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;

    // I'_nu / I_nu by modified Lentz
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }

    // downward recurrence to the fractional order
    let mut ril = FPMIN;
    let mut ripl = h * ril;
    let ril1 = ril;
    let rip1 = ripl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
    }
    let f = ripl / ril;

    let (mut rkmu, mut rk1) = if x < TEMME_XMAX {
        let (k0, k1) = temme_series(xmu, x);
        let ex = x.exp();
        (k0 * ex, k1 * ex)
    } else {
        steed_cf2(xmu, x)
    };

    let (ri, rip) = if x < TEMME_XMAX {
        // the Wronskian route cancels badly at small x when xmu < 0
        let (i0, i1) = (i_series(nu, x), i_series(nu + 1.0, x));
        let ex = (-x).exp();
        (i0 * ex, (i1 + nu * xi * i0) * ex)
    } else {
        let rkmup = xmu * xi * rkmu - rk1;
        let rimu = xi / (f * rkmu - rkmup);
        (rimu * ril1 / ril, rimu * rip1 / ril)
    };
    for i in 1..=nl {
        let rktemp = (xmu + i as f64) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = rktemp;
    }
    ScaledIK {
        i: ri,
        ip: rip,
        k: rkmu,
        kp: nu * xi * rkmu - rk1,
    }
}

/// Ascending series of `I_nu(x)`, all terms positive.
fn i_series(nu: f64, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = (0.5 * x).powf(nu) / gamma_fn(nu + 1.0).unwrap_or(f64::INFINITY);
    let mut sum = term;
    for k in 1..MAXIT {
        let fk = k as f64;
        term *= q / (fk * (nu + fk));
        sum += term;
        if term < sum * EPS {
            break;
        }
    }
    sum
}

/// Unscaled `K_mu(x)`, `K_{mu+1}(x)` for `|mu| <= 1/2`, `x < 2`.
fn temme_series(xmu: f64, x: f64) -> (f64, f64) {
    let xmu2 = xmu * xmu;
    let x2 = 0.5 * x;
    let pimu = PI * xmu;
    let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = xmu * d;
    let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
    let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = 1.0;
    let dd = x2 * x2;
    let mut sum1 = p;
    for i in 1..MAXIT {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - xmu2);
        c *= dd / fi;
        p /= fi - xmu;
        q /= fi + xmu;
        let del = c * ff;
        sum += del;
        let del1 = c * (p - fi * ff);
        sum1 += del1;
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    (sum, sum1 * 2.0 / x)
}

/// Scaled `e^x K_mu(x)`, `e^x K_{mu+1}(x)` for `|mu| <= 1/2`, `x >= 2`.
fn steed_cf2(xmu: f64, x: f64) -> (f64, f64) {
    let xmu2 = xmu * xmu;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - xmu2;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAXIT {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    h *= a1;
    let rkmu = (PI / (2.0 * x)).sqrt() / s;
    let rk1 = rkmu * (xmu + x + 0.5 - h) / x;
    (rkmu, rk1)
}

/// `e^{-z} I_nu(z)`, defined for all `z >= 0`.
pub fn bessel_i_scaled(nu: BesselOrder, z: f64) -> Result<f64> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::Domain {
            func: "bessel_i",
            arg: z,
            reason: "argument must be finite and non-negative",
        });
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    Ok(bessel_ik_scaled(nu.value(), z).i)
}

/// `e^{z} K_nu(z)` for `z >= 1e-12`.
pub fn bessel_k_scaled(nu: BesselOrder, z: f64) -> Result<f64> {
    if !(z >= BESSEL_K_ARG_MIN) || !z.is_finite() {
        return Err(Error::Domain {
            func: "bessel_k",
            arg: z,
            reason: "argument must be finite and at least 1e-12",
        });
    }
    Ok(bessel_ik_scaled(nu.value(), z).k)
}

/// `I`, `K` and their derivatives in one pass, exponentially scaled as in
/// [`ScaledIK`], for `z >= 1e-12`.
pub fn bessel_ik(nu: BesselOrder, z: f64) -> Result<ScaledIK> {
    if !(z >= BESSEL_K_ARG_MIN) || !z.is_finite() {
        return Err(Error::Domain {
            func: "bessel_ik",
            arg: z,
            reason: "argument must be finite and at least 1e-12",
        });
    }
    Ok(bessel_ik_scaled(nu.value(), z))
}

/// Modified Bessel function of the first kind, `I_nu(z)`, `0 <= z <= 700`.
pub fn bessel_i(nu: BesselOrder, z: f64) -> Result<f64> {
    let s = bessel_i_scaled(nu, z)?;
    if z > BESSEL_ARG_MAX {
        return Err(Error::Overflow {
            func: "bessel_i",
            arg: z,
        });
    }
    Ok(s * z.exp())
}

/// Modified Bessel function of the second kind, `K_nu(z)`, `1e-12 <= z <= 700`.
pub fn bessel_k(nu: BesselOrder, z: f64) -> Result<f64> {
    let s = bessel_k_scaled(nu, z)?;
    if z > BESSEL_ARG_MAX {
        return Err(Error::Underflow {
            func: "bessel_k",
            arg: z,
        });
    }
    Ok(s * (-z).exp())
}
