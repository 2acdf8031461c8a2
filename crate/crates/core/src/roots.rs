//! Scalar root finding on brackets.

use crate::error::{Error, Result};

const MAX_ITER: usize = 300;

/// Brent's method on `[a, b]`; `f(a)` and `f(b)` must differ in sign.
/// Converges when the bracket is narrower than `xtol` (plus a few ulps).
pub fn brent<F: FnMut(f64) -> Result<f64>>(mut f: F, a: f64, b: f64, xtol: f64) -> Result<f64> {
    let fa = f(a)?;
    let fb = f(b)?;
    brent_with_values(f, a, b, fa, fb, xtol)
}

/// [`brent`] with the end-point values already known.
pub fn brent_with_values<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    xtol: f64,
) -> Result<f64> {
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::Bracket(format!(
            "f({a:e}) = {fa:e} and f({b:e}) = {fb:e} do not bracket a root"
        )));
    }
    let mut c = b;
    let mut fc = fb;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * m * q - (tol * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
        if !fb.is_finite() {
            return Err(Error::Bracket(format!("function not finite at {b:e}")));
        }
    }
    Err(Error::Bracket(format!("Brent iteration did not converge near {b:e}")))
}

/// Shrinks `[lo, hi]` with `pred(lo) = false`, `pred(hi) = true` until the
/// interval is narrower than `xtol`, returning the final `(lo, hi)`.
pub fn bisect_predicate<P: FnMut(f64) -> Result<bool>>(
    mut pred: P,
    mut lo: f64,
    mut hi: f64,
    xtol: f64,
) -> Result<(f64, f64)> {
    for _ in 0..MAX_ITER {
        if (hi - lo).abs() <= xtol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}
