use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::RadialPotential;
use crate::quad::{cumulative_uniform, interval_stencil, STENCIL};

pub const DEFAULT_NODES: usize = 4000;
pub const MIN_NODES: usize = 2000;
/// Default outer radius in units of the range `a`.
pub const DEFAULT_RMAX: f64 = 100.0;
pub const MIN_RMAX: f64 = 40.0;
/// Default first node in units of `a`.
pub const DEFAULT_RFIRST: f64 = 1e-7;
pub const MAX_RFIRST: f64 = 1e-6;

const MIN_SEGMENT_NODES: usize = 12;

/// Log-spaced radial grid. Segments are uniform in `ln r` and meet at the
/// discontinuities of the potential; the shared node appears once at the end
/// of one segment and again at the start of the next, carrying the inner and
/// outer limits of `v` respectively.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    /// `(first index, last index, step in ln r)` per segment.
    segments: Vec<(usize, usize, f64)>,
    r_max: f64,
}

impl RadialGrid {
    /// Grid with the default resolution for `p`.
    pub fn for_potential(p: &RadialPotential) -> Result<Self> {
        Self::new(p, DEFAULT_NODES, DEFAULT_RMAX * p.range_a())
    }

    /// `n_nodes` log-spaced nodes from `1e-7 a` to `r_max`.
    pub fn new(p: &RadialPotential, n_nodes: usize, r_max: f64) -> Result<Self> {
        Self::with_first(p, n_nodes, r_max, DEFAULT_RFIRST * p.range_a())
    }

    pub fn with_first(p: &RadialPotential, n_nodes: usize, r_max: f64, r_first: f64) -> Result<Self> {
        let a = p.range_a();
        if n_nodes < MIN_NODES {
            return Err(Error::Grid(format!("at least {MIN_NODES} nodes required, got {n_nodes}")));
        }
        if !(r_max >= MIN_RMAX * a) || !r_max.is_finite() {
            return Err(Error::Grid(format!("r_max = {r_max} is below {MIN_RMAX} a = {}", MIN_RMAX * a)));
        }
        if !(r_first > 0.0 && r_first <= MAX_RFIRST * a * (1.0 + 1e-12)) {
            return Err(Error::Grid(format!("first node {r_first} must lie in (0, {MAX_RFIRST} a]")));
        }
        let mut cuts = vec![r_first];
        cuts.extend(p.discontinuities().into_iter().filter(|&b| b > r_first * 1.01 && b < r_max * 0.99));
        cuts.push(r_max);
        let total = (r_max / r_first).ln();
        let k = cuts.len() - 1;
        let intervals = n_nodes - 1;
        let mut nodes = Vec::with_capacity(n_nodes + k);
        let mut segments = Vec::with_capacity(k);
        let mut used = 0usize;
        for s in 0..k {
            let (lo, hi) = (cuts[s], cuts[s + 1]);
            let share = (hi / lo).ln() / total;
            let m = if s + 1 == k {
                intervals.saturating_sub(used)
            } else {
                ((share * intervals as f64).round() as usize).max(MIN_SEGMENT_NODES)
            }
            .max(MIN_SEGMENT_NODES);
            used += m;
            let h = (hi / lo).ln() / m as f64;
            let start = nodes.len();
            for j in 0..=m {
                let r = if j == m { hi } else { lo * (h * j as f64).exp() };
                nodes.push(r);
            }
            segments.push((start, nodes.len() - 1, h));
        }
        Ok(Self { nodes, segments, r_max })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn r_first(&self) -> f64 {
        self.nodes[0]
    }

    pub(crate) fn segments(&self) -> &[(usize, usize, f64)] {
        &self.segments
    }

    /// Same layout with twice as many intervals.
    pub fn refined(&self, p: &RadialPotential) -> Result<Self> {
        Self::with_first(p, 2 * (self.nodes.len() - self.segments.len()) + 1, self.r_max, self.nodes[0])
    }

    /// Potential values on the nodes, one-sided at segment ends.
    pub fn potential_values(&self, p: &RadialPotential) -> Vec<f64> {
        let mut v = vec![0.0; self.nodes.len()];
        for &(i0, i1, _) in &self.segments {
            for (i, vi) in v.iter_mut().enumerate().take(i1 + 1).skip(i0) {
                let r = self.nodes[i];
                *vi = if i == i0 && i0 > 0 {
                    p.value_side(r, false)
                } else if i == i1 {
                    p.value_side(r, true)
                } else {
                    p.value(r)
                };
            }
        }
        v
    }

    /// Running integral `int_0^{r_i} f dr` from samples of `f` on the nodes.
    /// Below the first node `f` is continued as a power law fitted to the
    /// first two samples.
    pub fn cumulative(&self, f: &[f64]) -> Vec<f64> {
        assert_eq!(f.len(), self.nodes.len());
        let mut out = vec![0.0; f.len()];
        let mut acc = self.head(f);
        for &(i0, i1, h) in &self.segments {
            let g: Vec<f64> = (i0..=i1).map(|i| f[i] * self.nodes[i]).collect();
            let c = cumulative_uniform(&g, h);
            for (j, cj) in c.iter().enumerate() {
                out[i0 + j] = acc + cj;
            }
            acc += c[c.len() - 1];
        }
        out
    }

    /// `S_i = int_0^{r_i} f(r) e^{-kappa (r_i - r)} dr`, evaluated without
    /// forming the growing factor `e^{kappa r}`.
    pub fn cumulative_decayed(&self, f: &[f64], kappa: f64) -> Vec<f64> {
        assert_eq!(f.len(), self.nodes.len());
        let r = &self.nodes;
        let mut out = vec![0.0; f.len()];
        let mut acc = self.head(f) * (-kappa * r[0]).exp();
        for &(i0, i1, h) in &self.segments {
            let n = i1 - i0 + 1;
            out[i0] = acc;
            for i in 0..n - 1 {
                let (start, w) = interval_stencil(i, n);
                let end = r[i0 + i + 1];
                let piece: f64 = (0..STENCIL)
                    .map(|j| {
                        let k = i0 + start + j;
                        w[j] * f[k] * r[k] * (kappa * (r[k] - end)).exp()
                    })
                    .sum();
                acc = acc * (-kappa * (end - r[i0 + i])).exp() + piece * h;
                out[i0 + i + 1] = acc;
            }
        }
        out
    }

    /// `int_0^{r_max} f dr`.
    pub fn integral(&self, f: &[f64]) -> f64 {
        *self.cumulative(f).last().unwrap()
    }

    /// Independent lower-order check of [`Self::integral`]: composite
    /// Simpson per segment, closing odd segments with the 3/8 rule.
    pub fn integral_simpson(&self, f: &[f64]) -> f64 {
        let mut acc = self.head(f);
        for &(i0, i1, h) in &self.segments {
            let g = |i: usize| f[i] * self.nodes[i];
            let m = i1 - i0;
            let even = if m % 2 == 0 { m } else { m - 3 };
            let mut s = 0.0;
            for j in (0..even).step_by(2) {
                s += g(i0 + j) + 4.0 * g(i0 + j + 1) + g(i0 + j + 2);
            }
            acc += s * h / 3.0;
            if m % 2 == 1 {
                let k = i0 + even;
                acc += 3.0 * h / 8.0 * (g(k) + 3.0 * g(k + 1) + 3.0 * g(k + 2) + g(k + 3));
            }
        }
        acc
    }

    fn head(&self, f: &[f64]) -> f64 {
        let (r0, r1) = (self.nodes[0], self.nodes[1]);
        let (f0, f1) = (f[0], f[1]);
        if f0 == 0.0 {
            return 0.0;
        }
        let power = if f1 / f0 > 0.0 { (f1 / f0).ln() / (r1 / r0).ln() } else { 0.0 };
        if power <= -1.0 {
            return f64::INFINITY.copysign(f0);
        }
        f0 * r0 / (power + 1.0)
    }

    /// Index of the first node at or beyond `r`.
    pub fn index_at_or_after(&self, r: f64) -> Option<usize> {
        let i = self.nodes.partition_point(|&x| x < r);
        (i < self.nodes.len()).then_some(i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{make_catalog_potential, PotentialKind};

    #[test]
    fn layout_and_validation() {
        let p = make_catalog_potential(PotentialKind::SquareWell, 1.0).unwrap();
        let g = RadialGrid::for_potential(&p).unwrap();
        assert!(g.nodes().windows(2).all(|w| w[1] >= w[0]));
        assert_eq!(g.segments().len(), 2);
        let (_, end, _) = g.segments()[0];
        assert_eq!(g.nodes()[end], 1.0);
        assert_eq!(g.nodes()[end + 1], 1.0);
        let v = g.potential_values(&p);
        assert_eq!((v[end], v[end + 1]), (-1.0, 0.0));
        assert!(g.len() >= MIN_NODES);
        assert!(RadialGrid::new(&p, 100, 100.0).is_err());
        assert!(RadialGrid::new(&p, 4000, 10.0).is_err());
        assert!(RadialGrid::with_first(&p, 4000, 100.0, 1e-3).is_err());
    }

    #[test]
    fn grid_quadrature() {
        let p = make_catalog_potential(PotentialKind::SquareWell, 1.0).unwrap();
        let g = RadialGrid::for_potential(&p).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|r| r * (-r).exp()).collect();
        assert!((g.integral(&f) - 1.0).abs() < 1e-12);
        assert!((g.integral_simpson(&f) - 1.0).abs() < 1e-9);
        // power-law head with an integrable singularity
        let f: Vec<f64> = g.nodes().iter().map(|r| r.powf(-0.5) * (-r).exp()).collect();
        assert!((g.integral(&f) - std::f64::consts::PI.sqrt()).abs() < 1e-10);
        let d = g.cumulative_decayed(&f, 0.0);
        let c = g.cumulative(&f);
        assert!(d.iter().zip(&c).all(|(a, b)| (a - b).abs() < 1e-14));
        // int_0^r e^{-s} e^{-(r - s)} ds = r e^{-r}
        let f: Vec<f64> = g.nodes().iter().map(|r| (-r).exp()).collect();
        let d = g.cumulative_decayed(&f, 1.0);
        for (r, di) in g.nodes().iter().zip(&d) {
            assert!((di - r * (-r).exp()).abs() < 1e-14, "r={r}");
        }
        let one = vec![1.0; g.len()];
        let d = g.cumulative_decayed(&one, 0.05);
        for (r, di) in g.nodes().iter().zip(&d) {
            let want = (1.0 - (-0.05 * r).exp()) / 0.05;
            assert!((di - want).abs() < 1e-11 * (1.0 + r), "r={r}");
        }
        // a flat source at kappa = 1 is under-resolved far out (kappa dr ~ 0.5)
        // but converges at sixth order
        let flat_err = |n: usize| {
            let g = RadialGrid::new(&p, n, 100.0).unwrap();
            let d = g.cumulative_decayed(&vec![1.0; g.len()], 1.0);
            g.nodes().iter().zip(&d).map(|(r, di)| (di - (1.0 - (-r).exp())).abs()).fold(0.0, f64::max)
        };
        let ratio = flat_err(4000) / flat_err(8000);
        assert!(ratio > 40.0, "refinement ratio {ratio}");
        let c = g.cumulative(&one);
        for (r, ci) in g.nodes().iter().zip(&c) {
            assert!((ci - r).abs() < 1e-10 * (1.0 + r));
        }
    }
}
