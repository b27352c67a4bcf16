//! Measure of the slab set and the weighted integral over its complement.
//!
//! The quadrature routines rotate `e` onto `(|e|, 0, 0)` and use cylindrical
//! coordinates `(p₁, ρ)` around the first axis. With `W = 1 + p₁² + ρ²` the
//! area element `2πρ dρ` becomes `π dW`, and for fixed `p₁` the slab value
//! `g(W) = |e| p₁ W^{-1/2} + e'` is monotone in `W`, so the slab condition
//! `|g| ≤ ε` cuts out a single `W`-interval that is found in closed form.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::geometry::direction::Direction4;
use crate::numerics::{adaptive_gk15, ball_points, ball_volume};
use crate::{Error, Result, Vec3};

/// `C_R = max(8πR³/3, 16R(1 + R²)^{3/2})`.
pub fn c_r(radius: f64) -> Result<f64> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::invalid("R", "must be positive and finite"));
    }
    let a = 8.0 * PI * radius.powi(3) / 3.0;
    let b = 16.0 * radius * (1.0 + radius * radius).powf(1.5);
    Ok(a.max(b))
}

/// Lower bound on `|e|` for a nonempty slab set as printed:
/// `(-Rε + √(R² + 1 - ε))/(R² + 1)`.
pub fn ep4_threshold(radius: f64, eps: f64) -> f64 {
    let r2 = radius * radius;
    (-radius * eps + (r2 + 1.0 - eps).sqrt()) / (r2 + 1.0)
}

/// The same bound with `ε²` under the root, the root of
/// `√(1 - a²) - Ra = ε`.
pub fn ep4_threshold_sharp(radius: f64, eps: f64) -> f64 {
    let r2 = radius * radius;
    (-radius * eps + (r2 + 1.0 - eps * eps).sqrt()) / (r2 + 1.0)
}

/// `E_R` for a direction, width `ε` and radius `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceSet {
    pub direction: Direction4,
    pub epsilon: f64,
    pub radius: f64,
}

impl SliceSet {
    pub fn new(direction: Direction4, epsilon: f64, radius: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::invalid("epsilon", "must be positive"));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::invalid("R", "must be positive"));
        }
        Ok(SliceSet {
            direction,
            epsilon,
            radius,
        })
    }

    /// `p·e/√(1 + |p|²) + e'`.
    #[inline]
    pub fn slab_value(&self, p: &Vec3) -> f64 {
        slab_value(&self.direction, p)
    }

    pub fn contains(&self, p: &Vec3) -> bool {
        let n2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        n2 <= self.radius * self.radius && self.slab_value(p).abs() <= self.epsilon
    }
}

#[inline]
fn slab_value(d: &Direction4, p: &Vec3) -> f64 {
    let e = &d.e;
    (p[0] * e[0] + p[1] * e[1] + p[2] * e[2]) / (1.0 + p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt() + d.e_prime
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub hits: usize,
    pub n: usize,
}

fn check_budget(n: usize) -> Result<()> {
    if n < 10_000 {
        return Err(Error::invalid("n", format!("need at least 10^4 points, got {n}")));
    }
    Ok(())
}

fn proportion(hits: usize, n: usize, volume: f64) -> McEstimate {
    let q = hits as f64 / n as f64;
    McEstimate {
        value: volume * q,
        std_error: volume * (q * (1.0 - q) / n as f64).sqrt(),
        hits,
        n,
    }
}

/// `mes(E_R)` from `n` uniform points of `B_R`; binomial standard error.
pub fn measure_slice_mc(set: &SliceSet, n: usize, seed: u64) -> Result<McEstimate> {
    Ok(measure_slice_sweep(&set.direction, &[set.epsilon], set.radius, n, seed)?[0])
}

/// [`measure_slice_mc`] for several `ε` on one shared point set.
pub fn measure_slice_sweep(dir: &Direction4, eps: &[f64], radius: f64, n: usize, seed: u64) -> Result<Vec<McEstimate>> {
    check_budget(n)?;
    for &e in eps {
        SliceSet::new(*dir, e, radius)?;
    }
    let pts = ball_points(radius, n, seed)?;
    let mut hits = vec![0usize; eps.len()];
    for p in &pts {
        let g = slab_value(dir, p).abs();
        for (h, &e) in hits.iter_mut().zip(eps) {
            if g <= e {
                *h += 1;
            }
        }
    }
    let vol = ball_volume(radius);
    Ok(hits.into_iter().map(|h| proportion(h, n, vol)).collect())
}

/// `W`-interval (possibly unbounded above) on which `|c W^{-1/2} + e'| ≤ ε`,
/// or `None` when it is empty. Assumes `c ≠ 0`.
fn slab_w_interval(c: f64, e_prime: f64, eps: f64) -> Option<(f64, f64)> {
    // c·w ∈ [-ε - e', ε - e'] with w = W^{-1/2} > 0.
    let (mut lo, mut hi) = ((-eps - e_prime) / c, (eps - e_prime) / c);
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    if hi <= 0.0 {
        return None;
    }
    let w_lo = 1.0 / (hi * hi);
    let w_hi = if lo <= 0.0 { f64::INFINITY } else { 1.0 / (lo * lo) };
    Some((w_lo, w_hi))
}

/// Length of `[w0, w1] ∩ {|g| ≤ ε}` for fixed `p₁`.
fn slab_w_length(a: f64, e_prime: f64, eps: f64, p1: f64, w0: f64, w1: f64) -> f64 {
    let c = a * p1;
    if c == 0.0 {
        return if e_prime.abs() <= eps { w1 - w0 } else { 0.0 };
    }
    match slab_w_interval(c, e_prime, eps) {
        Some((lo, hi)) => (hi.min(w1) - lo.max(w0)).max(0.0),
        None => 0.0,
    }
}

const QUAD_ABS_TOL: f64 = 1e-10;
const QUAD_REL_TOL: f64 = 1e-10;

/// `[-R, R]` cut at every `p₁` where the slab boundary `|g| = ε` meets the
/// sphere `W = 1 + R²` or the axis `W = 1 + p₁²`. Between cuts the slab length
/// is smooth and either positive throughout or zero throughout, so a narrow
/// slab cannot slip between quadrature nodes.
fn p1_breakpoints(a: f64, e_prime: f64, eps: f64, radius: f64) -> Vec<f64> {
    let mut cuts = vec![-radius, 0.0, radius];
    if a > 0.0 {
        let w1 = (1.0 + radius * radius).sqrt();
        for target in [eps - e_prime, -eps - e_prime] {
            cuts.push(target * w1 / a);
            let k = target / a;
            if k.abs() < 1.0 {
                cuts.push(k / (1.0 - k * k).sqrt());
            }
        }
    }
    cuts.retain(|c| c.abs() <= radius);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts
}

fn piecewise_gk15<F: FnMut(f64) -> f64>(mut f: F, cuts: &[f64]) -> f64 {
    cuts.windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| adaptive_gk15(&mut f, w[0], w[1], QUAD_ABS_TOL, QUAD_REL_TOL).0)
        .sum()
}

/// `mes(E_R)` by one-dimensional adaptive quadrature over `p₁` of the exact
/// slab length in `W`.
pub fn measure_slice_quadrature(dir: &Direction4, eps: f64, radius: f64) -> Result<f64> {
    SliceSet::new(*dir, eps, radius)?;
    let a = dir.e_norm();
    let w1 = 1.0 + radius * radius;
    let v = piecewise_gk15(
        |p1| slab_w_length(a, dir.e_prime, eps, p1, 1.0 + p1 * p1, w1),
        &p1_breakpoints(a, dir.e_prime, eps, radius),
    );
    Ok(PI * v)
}

/// `∫_{B_R ∩ {|g| > ε}} g^{-2} dp` with `g = p·e/√(1 + |p|²) + e'`, by nested
/// adaptive quadrature in `(p₁, W)` after aligning `e` with the first axis.
pub fn lemma4_integral_reduced(dir: &Direction4, eps: f64, radius: f64) -> Result<f64> {
    SliceSet::new(*dir, eps, radius)?;
    let a = dir.e_norm();
    let ep = dir.e_prime;
    let w1 = 1.0 + radius * radius;
    let inner = |p1: f64| -> f64 {
        let w0 = 1.0 + p1 * p1;
        let c = a * p1;
        if c == 0.0 {
            return if ep.abs() > eps { (w1 - w0) / (ep * ep) } else { 0.0 };
        }
        let g = |w: f64| c / w.sqrt() + ep;
        let piece = |lo: f64, hi: f64| -> f64 {
            if hi <= lo {
                return 0.0;
            }
            adaptive_gk15(
                |w| {
                    let v = g(w);
                    1.0 / (v * v)
                },
                lo,
                hi,
                QUAD_ABS_TOL,
                QUAD_REL_TOL,
            )
            .0
        };
        match slab_w_interval(c, ep, eps) {
            None => piece(w0, w1),
            Some((lo, hi)) => piece(w0, lo.min(w1)) + piece(hi.max(w0), w1),
        }
    };
    Ok(PI * piecewise_gk15(inner, &p1_breakpoints(a, ep, eps, radius)))
}

/// Direct Monte-Carlo estimate of the weighted integral over uniform points of `B_R`.
///
/// Without a single hit the sample variance is zero although the region may
/// be nonempty; the standard error is then `vol·ε⁻²/n`, one hit of the
/// largest weight.
pub fn lemma4_integral_mc(dir: &Direction4, eps: f64, radius: f64, n: usize, seed: u64) -> Result<McEstimate> {
    check_budget(n)?;
    SliceSet::new(*dir, eps, radius)?;
    let pts = ball_points(radius, n, seed)?;
    let (mut s1, mut s2, mut hits) = (0.0, 0.0, 0usize);
    for p in &pts {
        let g = slab_value(dir, p);
        if g.abs() > eps {
            let w = 1.0 / (g * g);
            s1 += w;
            s2 += w * w;
            hits += 1;
        }
    }
    let nf = n as f64;
    let vol = ball_volume(radius);
    let mean = s1 / nf;
    let var = (s2 / nf - mean * mean).max(0.0) * nf / (nf - 1.0);
    let std_error = if hits == 0 { vol / (eps * eps * nf) } else { vol * (var / nf).sqrt() };
    Ok(McEstimate {
        value: vol * mean,
        std_error,
        hits,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_r_closed_form() {
        assert!((c_r(1.0).unwrap() - 32.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!(c_r(0.0).is_err());
        assert!(c_r(1e-6).unwrap() < 1e-3);
        let mut last = 0.0;
        for k in 1..100 {
            let v = c_r(k as f64 * 0.05).unwrap();
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn pure_time_direction_has_empty_slab() {
        let d = Direction4::new(1.0, [0.0; 3]).unwrap();
        let set = SliceSet::new(d, 0.5, 1.0).unwrap();
        assert_eq!(measure_slice_mc(&set, 10_000, 1).unwrap().value, 0.0);
        assert_eq!(measure_slice_quadrature(&d, 0.5, 1.0).unwrap(), 0.0);
        let v = lemma4_integral_reduced(&d, 0.5, 1.0).unwrap();
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-9);
        let mc = lemma4_integral_mc(&d, 0.5, 1.0, 10_000, 1).unwrap();
        assert!((mc.value - 4.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn wide_slab_covers_ball() {
        let d = Direction4::new(0.0, [1.0, 0.0, 0.0]).unwrap();
        let eps = 1.0 / 2f64.sqrt();
        let m = measure_slice_mc(&SliceSet::new(d, eps, 1.0).unwrap(), 10_000, 2).unwrap();
        assert!((m.value - 4.0 * PI / 3.0).abs() < 1e-12);
        assert!((measure_slice_quadrature(&d, eps, 1.0).unwrap() - 4.0 * PI / 3.0).abs() < 1e-9);
    }

    #[test]
    fn thin_slab_is_not_missed() {
        let d = Direction4::normalized(0.0879, [0.0, 0.0, -0.9961]).unwrap();
        let q = measure_slice_quadrature(&d, 0.02, 1.0).unwrap();
        let mc = measure_slice_mc(&SliceSet::new(d, 0.02, 1.0).unwrap(), 100_000, 3).unwrap();
        assert!(q > 0.1);
        assert!((q - mc.value).abs() < 4.0 * mc.std_error);
    }

    #[test]
    fn missed_sliver_keeps_an_error_bar() {
        let d = crate::geometry::sample_directions(200, 11)[63];
        let reduced = lemma4_integral_reduced(&d, 1.0, 1.0).unwrap();
        let mc = lemma4_integral_mc(&d, 1.0, 1.0, 100_000, 74).unwrap();
        assert!(reduced > 0.0);
        assert_eq!(mc.hits, 0);
        assert!((mc.value - reduced).abs() < 3.0 * mc.std_error);
    }

    #[test]
    fn small_budget_is_rejected() {
        let d = Direction4::new(1.0, [0.0; 3]).unwrap();
        assert!(measure_slice_mc(&SliceSet::new(d, 0.1, 1.0).unwrap(), 9_999, 1).is_err());
    }

    #[test]
    fn printed_threshold_is_weaker_than_sharp_one() {
        for eps in [0.01, 0.1, 0.3, 0.49] {
            assert!(ep4_threshold(1.0, eps) <= ep4_threshold_sharp(1.0, eps));
        }
    }
}
