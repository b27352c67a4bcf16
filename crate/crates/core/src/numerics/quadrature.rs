//! One-dimensional quadrature rules.

use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Description of a quadrature rule, recorded in result metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum QuadratureRule {
    GaussLegendre { order: usize, max_panel: f64 },
    Trapezoid { nodes: usize },
    SphericalProduct { radial: usize, polar: usize, azimuthal: usize, radius: f64 },
    Adaptive { abs_tol: f64, rel_tol: f64 },
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule; exact for polynomials of degree `≤ 2n − 1`.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("order", "Gauss–Legendre order must be positive"));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess followed by Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(GaussLegendre { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integrate `f` over `[a, b]` with one panel.
    #[inline]
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, w * half))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre: uniform panels no wider than `max_panel`.
#[derive(Debug, Clone)]
pub struct CompositeGaussLegendre {
    rule: GaussLegendre,
    max_panel: f64,
}

impl CompositeGaussLegendre {
    pub fn new(order: usize, max_panel: f64) -> Result<Self> {
        if order < 2 {
            return Err(Error::invalid("quad_order", format!("must be at least 2, got {order}")));
        }
        if !(max_panel > 0.0) || !max_panel.is_finite() {
            return Err(Error::invalid("max_panel", "must be positive and finite"));
        }
        Ok(CompositeGaussLegendre {
            rule: GaussLegendre::new(order)?,
            max_panel,
        })
    }

    pub fn order(&self) -> usize {
        self.rule.order()
    }

    pub fn max_panel(&self) -> f64 {
        self.max_panel
    }

    pub fn describe(&self) -> QuadratureRule {
        QuadratureRule::GaussLegendre {
            order: self.order(),
            max_panel: self.max_panel,
        }
    }

    pub fn panels(&self, a: f64, b: f64) -> usize {
        (((b - a) / self.max_panel).ceil() as usize).max(1)
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        if b <= a {
            return 0.0;
        }
        let n = self.panels(a, b);
        let h = (b - a) / n as f64;
        let mut acc = 0.0;
        for k in 0..n {
            let lo = a + k as f64 * h;
            let hi = if k + 1 == n { b } else { lo + h };
            acc += self.rule.integrate(lo, hi, &mut f);
        }
        acc
    }
}

const GK_XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const GK_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kron = fc * GK_WGK[7];
    let mut gauss = fc * GK_WG[3];
    for j in 0..7 {
        let dx = half * GK_XGK[j];
        let s = f(mid - dx) + f(mid + dx);
        kron += GK_WGK[j] * s;
        if j % 2 == 1 {
            gauss += GK_WG[j / 2] * s;
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss–Kronrod (7/15) quadrature.
///
/// Returns `(value, error_estimate)`. Stops when the summed error estimate is
/// below `max(abs_tol, rel_tol·|value|)` or after `max_segments` bisections.
/// A kink lying between a segment end and its outermost node is invisible to
/// the error estimate, so known kinks must be passed as segment endpoints.
pub fn adaptive_gk15<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> (f64, f64) {
    const MAX_SEGMENTS: usize = 2000;
    if b <= a {
        return (0.0, 0.0);
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: v, error: e });
    let mut total = v;
    let mut err = e;
    let mut segments = 1;
    while err > abs_tol.max(rel_tol * total.abs()) && segments < MAX_SEGMENTS {
        let Some(seg) = heap.pop() else { break };
        let m = 0.5 * (seg.a + seg.b);
        if m <= seg.a || m >= seg.b {
            heap.push(seg);
            break;
        }
        let (v1, e1) = gk15(&mut f, seg.a, m);
        let (v2, e2) = gk15(&mut f, m, seg.b);
        total += v1 + v2 - seg.value;
        err += e1 + e2 - seg.error;
        heap.push(Segment { a: seg.a, b: m, value: v1, error: e1 });
        heap.push(Segment { a: m, b: seg.b, value: v2, error: e2 });
        segments += 1;
    }
    // Re-sum to avoid drift from the running updates.
    let value: f64 = heap.iter().map(|s| s.value).sum();
    let error: f64 = heap.iter().map(|s| s.error).sum();
    (value, error)
}

/// Trapezoid weights for `n` uniform nodes with spacing `h`.
pub fn trapezoid_weight(i: usize, n: usize, h: f64) -> f64 {
    if n == 1 {
        h
    } else if i == 0 || i + 1 == n {
        0.5 * h
    } else {
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_to_degree_2n_minus_1() {
        for n in 1..=20 {
            let gl = GaussLegendre::new(n).unwrap();
            for deg in 0..(2 * n) {
                let got = gl.integrate(-1.0, 1.0, |x| x.powi(deg as i32));
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((got - exact).abs() < 1e-13, "n={n} deg={deg} got={got}");
            }
        }
    }

    #[test]
    fn weights_sum_to_two() {
        for n in [2, 7, 32, 64] {
            let gl = GaussLegendre::new(n).unwrap();
            let s: f64 = gl.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn composite_rejects_low_order() {
        assert!(CompositeGaussLegendre::new(0, 0.1).is_err());
        assert!(CompositeGaussLegendre::new(1, 0.1).is_err());
        assert!(CompositeGaussLegendre::new(2, 0.0).is_err());
    }

    #[test]
    fn composite_integrates_exponential() {
        let r = CompositeGaussLegendre::new(4, 1.0 / 64.0).unwrap();
        let got = r.integrate(0.0, 1.0, f64::exp);
        assert!((got - (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_kinks() {
        let (v, _) = adaptive_gk15(|x: f64| x.abs().sqrt(), -1.0, 2.0, 1e-11, 1e-12);
        let exact = 2.0 / 3.0 * (1.0 + 2f64.powf(1.5));
        assert!((v - exact).abs() < 1e-9);
    }
}
