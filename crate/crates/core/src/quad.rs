//! Quadrature: globally adaptive Gauss–Kronrod on panel sets graded towards
//! the origin and towards infinity, and high-order cumulative rules for data
//! sampled on uniform grids.

use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const MAX_INTERVALS: usize = 20_000;

/// 21-point Kronrod value and `|K21 - G10|` on `[a, b]`.
pub fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[10];
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

struct Piece {
    a: f64,
    b: f64,
    val: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive integral over the union of the panels delimited by
/// `edges` (sorted, strictly increasing), to relative tolerance `rel_tol`.
pub fn integrate_edges<F: FnMut(f64) -> f64>(mut f: F, edges: &[f64], rel_tol: f64) -> Result<f64> {
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in edges.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (val, err) = gk21(&mut f, w[0], w[1]);
        total += val;
        total_err += err;
        heap.push(Piece {
            a: w[0],
            b: w[1],
            val,
            err,
        });
    }
    if !total.is_finite() {
        return Err(Error::Quadrature("integrand is not finite".into()));
    }
    let mut count = heap.len();
    while total_err > rel_tol * total.abs() && total_err > 1e-300 {
        if count >= MAX_INTERVALS {
            return Err(Error::Quadrature(format!(
                "no convergence after {count} subintervals (estimate {total:e}, error {total_err:e})"
            )));
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at machine precision; accept it as is
            total_err -= worst.err;
            continue;
        }
        let (v1, e1) = gk21(&mut f, worst.a, mid);
        let (v2, e2) = gk21(&mut f, mid, worst.b);
        total += v1 + v2 - worst.val;
        total_err += e1 + e2 - worst.err;
        heap.push(Piece {
            a: worst.a,
            b: mid,
            val: v1,
            err: e1,
        });
        heap.push(Piece {
            a: mid,
            b: worst.b,
            val: v2,
            err: e2,
        });
        count += 1;
        if !total.is_finite() {
            return Err(Error::Quadrature("integrand is not finite".into()));
        }
    }
    Ok(total)
}

/// Adaptive integral over the finite interval `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    integrate_edges(f, &[a, b], rel_tol)
}

const ORIGIN_LEVELS: i32 = 60;
const TAIL_LEVELS: i32 = 14;

fn push_breakpoints(edges: &mut Vec<f64>, breakpoints: &[f64], lo: f64, hi: f64) {
    edges.extend(breakpoints.iter().copied().filter(|&b| b > lo && b < hi));
    edges.sort_by(f64::total_cmp);
    edges.dedup();
}

/// Panels on `[0, r]` graded geometrically towards the origin.
pub fn edges_upto(r: f64, breakpoints: &[f64]) -> Vec<f64> {
    let mut edges = vec![0.0];
    edges.extend((0..=ORIGIN_LEVELS).rev().map(|k| r * 0.5f64.powi(k)));
    push_breakpoints(&mut edges, breakpoints, 0.0, r);
    edges
}

/// Panels on `[r, r_end]` growing geometrically from `max(r, scale)`.
pub fn edges_from(r: f64, scale: f64, breakpoints: &[f64]) -> Vec<f64> {
    let start = r.max(scale * 0.5f64.powi(ORIGIN_LEVELS));
    let mut edges = vec![r];
    let base = start.max(scale);
    if base > r {
        // graded panels from r up to the scale
        let mut x = base;
        while x > r * 1.5 && x > base * 0.5f64.powi(ORIGIN_LEVELS) {
            edges.push(x);
            x *= 0.5;
        }
    }
    let mut x = base;
    for _ in 0..=TAIL_LEVELS {
        x *= 2.0;
        edges.push(x);
    }
    edges.push(base * 2.0f64.powi(TAIL_LEVELS + 1) * 4.0);
    let hi = *edges.iter().fold(&f64::MIN, |m, x| if x > m { x } else { m });
    push_breakpoints(&mut edges, breakpoints, r, hi);
    edges
}

/// Panels covering `[0, ~65000 * scale]`, graded at both ends.
pub fn edges_radial(scale: f64, breakpoints: &[f64]) -> Vec<f64> {
    let mut edges = edges_upto(scale, &[]);
    edges.pop();
    edges.extend(edges_from(scale, scale, &[]));
    push_breakpoints(&mut edges, breakpoints, 0.0, f64::INFINITY);
    edges
}

/// `int_0^inf f(r) dr` for a radial integrand with length scale `scale`.
pub fn integrate_radial<F: FnMut(f64) -> f64>(f: F, scale: f64, breakpoints: &[f64], rel_tol: f64) -> Result<f64> {
    integrate_edges(f, &edges_radial(scale, breakpoints), rel_tol)
}

/// `int_0^r f`.
pub fn integrate_upto<F: FnMut(f64) -> f64>(f: F, r: f64, breakpoints: &[f64], rel_tol: f64) -> Result<f64> {
    if r <= 0.0 {
        return Ok(0.0);
    }
    integrate_edges(f, &edges_upto(r, breakpoints), rel_tol)
}

/// `int_r^inf f`.
pub fn integrate_from<F: FnMut(f64) -> f64>(f: F, r: f64, scale: f64, breakpoints: &[f64], rel_tol: f64) -> Result<f64> {
    integrate_edges(f, &edges_from(r, scale, breakpoints), rel_tol)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Weights `w_j` with `int_k^{k+1} p(x) dx = sum_j w_j p(j)` exact for
/// polynomials of degree `< STENCIL` sampled at `j = 0..STENCIL`.
fn interval_weights(k: usize) -> [f64; STENCIL] {
    let mut w = [0.0; STENCIL];
    for (j, wj) in w.iter_mut().enumerate() {
        // Lagrange basis L_j as a coefficient vector
        let mut poly = vec![1.0];
        let mut denom = 1.0;
        for m in 0..STENCIL {
            if m == j {
                continue;
            }
            let mut next = vec![0.0; poly.len() + 1];
            for (d, c) in poly.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * m as f64;
            }
            poly = next;
            denom *= j as f64 - m as f64;
        }
        let (lo, hi) = (k as f64, k as f64 + 1.0);
        let integral: f64 = poly
            .iter()
            .enumerate()
            .map(|(d, c)| c * (hi.powi(d as i32 + 1) - lo.powi(d as i32 + 1)) / (d as f64 + 1.0))
            .sum();
        *wj = integral / denom;
    }
    w
}

pub(crate) const STENCIL: usize = 6;

/// Stencil start and weights for interval `[i, i + 1]` of `n` uniform
/// samples, placing the interval as centrally as the ends allow.
pub(crate) fn interval_stencil(i: usize, n: usize) -> (usize, &'static [f64; STENCIL]) {
    static TABLE: OnceLock<Vec<[f64; STENCIL]>> = OnceLock::new();
    let table = TABLE.get_or_init(|| (0..STENCIL - 1).map(interval_weights).collect());
    let start = i.saturating_sub(STENCIL / 2 - 1).min(n - STENCIL);
    (start, &table[i - start])
}

/// Running integral `C_i = int_{x_0}^{x_i} g` of samples on a uniform grid
/// with spacing `h`, using sixth-order local interpolation per interval.
/// Needs at least six samples.
pub fn cumulative_uniform(g: &[f64], h: f64) -> Vec<f64> {
    let n = g.len();
    assert!(n >= STENCIL, "cumulative_uniform needs at least {STENCIL} samples");
    let mut out = Vec::with_capacity(n);
    out.push(0.0);
    let mut acc = 0.0;
    for i in 0..n - 1 {
        let (start, w) = interval_stencil(i, n);
        let piece: f64 = (0..STENCIL).map(|j| w[j] * g[start + j]).sum();
        acc += piece * h;
        out.push(acc);
    }
    out
}
