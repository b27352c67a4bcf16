//! Monte-Carlo estimate of the double-integral fractional seminorm
//!
//! `(∫∫ |ũ(y₁) - ũ(y₂)|^m / |y₁ - y₂|^{4+sp} dy₁ dy₂)^{1/p}`
//!
//! with `m = 2` ([`Variant::Paper`]) or `m = p` ([`Variant::Gagliardo`]), over
//! `y = (t, x) ∈ R⁴` with `ũ` extended by zero outside the grid.
//!
//! Sampling: `y₁` uniform in the box `S'` of nonzero nodes grown by one cell,
//! `y₂ = y₁ + rω` with `ω` uniform on `S³` and `r ∈ [r_min, r_max]` drawn with
//! density `∝ 1/r`. Pairs with both points outside `S'` contribute nothing and
//! pairs with exactly one point inside are counted twice through the symmetry
//! of the integrand. Offsets beyond `r_max = diam S'` leave `S'`, so their
//! contribution is added in closed form. Offsets below `r_min` (half a grid
//! cell) are omitted; a first-order Taylor estimate of that mass is reported
//! as `bias_bound`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::kinetic::AverageGrid4;
use crate::norms::{mean_and_se, root_with_error};
use crate::numerics::{adaptive_gk15, parallel_map, sobol_stream, SamplerSpec};
use crate::{Error, Result};

/// Surface area of the unit sphere `S³ ⊂ R⁴`.
const S3_AREA: f64 = 2.0 * PI * PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Squared difference in the numerator for every `p`.
    Paper,
    /// `|difference|^p` in the numerator.
    Gagliardo,
}

impl Variant {
    pub fn numerator_power(self, p_exp: f64) -> f64 {
        match self {
            Variant::Paper => 2.0,
            Variant::Gagliardo => p_exp,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeminormEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub variant: Variant,
    pub s: f64,
    pub p_exp: f64,
    /// Estimate of the double integral before the outer `1/p` power.
    pub integral: f64,
    pub integral_std_error: f64,
    /// Estimated mass of the omitted offsets `r < r_min`.
    pub bias_bound: f64,
    pub r_min: f64,
    pub r_max: f64,
}

impl SeminormEstimate {
    fn zero(variant: Variant, s: f64, p_exp: f64, n_samples: usize) -> Self {
        SeminormEstimate {
            value: 0.0,
            std_error: 0.0,
            n_samples,
            variant,
            s,
            p_exp,
            integral: 0.0,
            integral_std_error: 0.0,
            bias_bound: 0.0,
            r_min: 0.0,
            r_max: 0.0,
        }
    }

    /// `(integral + bias_bound)^{1/p}`, the value with the omitted
    /// near-diagonal mass added back.
    pub fn corrected_value(&self) -> f64 {
        (self.integral + self.bias_bound).max(0.0).powf(1.0 / self.p_exp)
    }
}

/// Whether `0 < s < min(1/p, 1 - 1/p)`.
pub fn admissible(s: f64, p_exp: f64) -> bool {
    p_exp > 1.0 && p_exp.is_finite() && s > 0.0 && s < (1.0 / p_exp).min(1.0 - 1.0 / p_exp)
}

/// Quadrilinear interpolation of the grid, 0 outside it.
pub fn interpolate(grid: &AverageGrid4, y: &[f64; 4]) -> f64 {
    let mut base = [0usize; 4];
    let mut frac = [0.0; 4];
    for k in 0..4 {
        let f = (y[k] - grid.origin[k]) / grid.spacing[k];
        let last = (grid.dims[k] - 1) as f64;
        if !(0.0..=last).contains(&f) {
            return 0.0;
        }
        let i = (f.floor() as usize).min(grid.dims[k] - 2);
        base[k] = i;
        frac[k] = f - i as f64;
    }
    let mut acc = 0.0;
    for corner in 0..16usize {
        let mut w = 1.0;
        let mut idx = base;
        for k in 0..4 {
            if corner >> k & 1 == 1 {
                idx[k] += 1;
                w *= frac[k];
            } else {
                w *= 1.0 - frac[k];
            }
        }
        if w != 0.0 {
            acc += w * grid.get(idx);
        }
    }
    acc
}

/// Bounding box of the nonzero nodes grown by one cell, or `None` for a zero grid.
fn active_box(grid: &AverageGrid4) -> Option<([f64; 4], [f64; 4])> {
    let mut lo = [usize::MAX; 4];
    let mut hi = [0usize; 4];
    let mut any = false;
    for (flat, v) in grid.values.iter().enumerate() {
        if *v != 0.0 {
            any = true;
            let i = grid.unravel(flat);
            for k in 0..4 {
                lo[k] = lo[k].min(i[k]);
                hi[k] = hi[k].max(i[k]);
            }
        }
    }
    any.then(|| {
        let a = std::array::from_fn(|k| grid.origin[k] + (lo[k] as f64 - 1.0) * grid.spacing[k]);
        let b = std::array::from_fn(|k| grid.origin[k] + (hi[k] as f64 + 1.0) * grid.spacing[k]);
        (a, b)
    })
}

/// `∫_{S³} |ω₁|^m dω = 8π ∫₀¹ c^m (1 - c²)^{1/2} dc`.
fn sphere_moment(m: f64) -> f64 {
    let (v, _) = adaptive_gk15(|c| c.powf(m) * (1.0 - c * c).max(0.0).sqrt(), 0.0, 1.0, 1e-14, 1e-12);
    8.0 * PI * v
}

/// `∫|∇ũ|^m` from centered differences at interior nodes.
fn gradient_moment(grid: &AverageGrid4, m: f64) -> f64 {
    let d = grid.dims;
    let mut acc = 0.0;
    for (flat, _) in grid.values.iter().enumerate() {
        let i = grid.unravel(flat);
        if (0..4).any(|k| i[k] == 0 || i[k] + 1 == d[k]) {
            continue;
        }
        let mut g2 = 0.0;
        for k in 0..4 {
            let mut a = i;
            let mut b = i;
            a[k] += 1;
            b[k] -= 1;
            let g = (grid.get(a) - grid.get(b)) / (2.0 * grid.spacing[k]);
            g2 += g * g;
        }
        if g2 > 0.0 {
            acc += g2.powf(0.5 * m);
        }
    }
    acc * grid.cell_volume()
}

/// Uniform point on `S³` from three uniforms.
#[inline]
fn sphere_point(u1: f64, u2: f64, u3: f64) -> [f64; 4] {
    let a = (1.0 - u1).sqrt();
    let b = u1.sqrt();
    let (s2, c2) = (2.0 * PI * u2).sin_cos();
    let (s3, c3) = (2.0 * PI * u3).sin_cos();
    [a * s2, a * c2, b * s3, b * c3]
}

/// Estimates the seminorm of the interpolated grid; `sampler` must be
/// 8-dimensional and supplies `points` pairs per shift.
pub fn gagliardo_mc(
    grid: &AverageGrid4,
    s: f64,
    p_exp: f64,
    variant: Variant,
    sampler: &SamplerSpec,
) -> Result<SeminormEstimate> {
    if !admissible(s, p_exp) {
        return Err(Error::Inadmissible { s, p: p_exp });
    }
    seminorm_mc(grid, s, p_exp, variant, sampler)
}

/// [`gagliardo_mc`] without the admissibility gate, for diagnostics at
/// `0 < s < 1`, `p ≥ 1` (for example the endpoint `s = 1/2`, `p = 2`).
pub fn seminorm_mc(
    grid: &AverageGrid4,
    s: f64,
    p_exp: f64,
    variant: Variant,
    sampler: &SamplerSpec,
) -> Result<SeminormEstimate> {
    if !(s > 0.0 && s < 1.0 && p_exp >= 1.0 && p_exp.is_finite()) {
        return Err(Error::invalid("s", "need 0 < s < 1 and finite p >= 1"));
    }
    sampler.validate()?;
    if sampler.dimension != 8 {
        return Err(Error::invalid("sampler", "pair sampler must have dimension 8"));
    }
    let n_samples = sampler.points * sampler.n_shifts;
    let Some((lo, hi)) = active_box(grid) else {
        return Ok(SeminormEstimate::zero(variant, s, p_exp, n_samples));
    };
    let m = variant.numerator_power(p_exp);
    let sp = s * p_exp;
    let side: [f64; 4] = std::array::from_fn(|k| hi[k] - lo[k]);
    let volume: f64 = side.iter().product();
    let r_max = side.iter().map(|d| d * d).sum::<f64>().sqrt();
    let r_min = 0.5 * grid.spacing.iter().cloned().fold(f64::INFINITY, f64::min);
    let log_span = (r_max / r_min).ln();
    let tail = 2.0 * S3_AREA * r_max.powf(-sp) / sp;
    let inside = |y: &[f64; 4]| (0..4).all(|k| y[k] >= lo[k] && y[k] <= hi[k]);
    let pow = |v: f64| if m == 2.0 { v * v } else { v.powf(m) };

    let stream = sobol_stream(*sampler)?;
    let shifts: Vec<usize> = (0..sampler.n_shifts).collect();
    let replicates = parallel_map(&shifts, |&k| {
        let mut u = [0.0; 8];
        let mut acc = 0.0;
        for i in 0..sampler.points as u64 {
            stream.fill(Some(k), i, &mut u);
            let y1: [f64; 4] = std::array::from_fn(|j| lo[j] + u[j] * side[j]);
            let r = r_min * (log_span * u[4]).exp();
            let w = sphere_point(u[5], u[6], u[7]);
            let y2: [f64; 4] = std::array::from_fn(|j| y1[j] + r * w[j]);
            let a = interpolate(grid, &y1);
            let b = interpolate(grid, &y2);
            let mut e = 0.0;
            let diff = (a - b).abs();
            if diff != 0.0 {
                let twice = if inside(&y2) { 1.0 } else { 2.0 };
                e += twice * S3_AREA * log_span * pow(diff) * r.powf(-sp);
            }
            if a != 0.0 {
                e += tail * pow(a.abs());
            }
            acc += e;
        }
        volume * acc / sampler.points as f64
    });
    let (integral, integral_se) = mean_and_se(&replicates);
    let (value, std_error) = root_with_error(integral, integral_se, p_exp);
    let bias_bound = sphere_moment(m) * gradient_moment(grid, m) * r_min.powf(m - sp) / (m - sp);
    Ok(SeminormEstimate {
        value,
        std_error,
        n_samples,
        variant,
        s,
        p_exp,
        integral,
        integral_std_error: integral_se,
        bias_bound,
        r_min,
        r_max,
    })
}
