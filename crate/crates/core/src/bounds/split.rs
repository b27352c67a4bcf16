//! Per-momentum Fourier split of the `H^{1/2}` integrand of `ũ`.
//!
//! With `σ_p(τ, z) = τ + p·z/p₀` and `S_ε = {p : |σ_p| ≤ α}`, the momentum
//! integral `∫ û dp` is split into the slab part `S₁ = ∫_{S_ε} û dp` and the
//! rest `S₂`, and `I_k = Σ |ξ| |S_k|² Δξ`. The bounds are
//! `I₁ ≤ C_R α ‖û‖²` and `I₂ ≤ (2C_R/α) ‖σ û‖²`, both norms over `(τ, z, p)`.

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::report::BoundReport;
use crate::geometry::c_r;
use crate::kinetic::{duhamel_solve_with, grid_layout, velocity, AverageGrid4, GridSpec, PhaseField, ScalarField7};
use crate::norms::{fft4_unchecked, SpectralGrid4, BOUNDARY_TOLERANCE};
use crate::numerics::{BallRule, CompositeGaussLegendre};
use crate::{Error, Result, Vec3};

/// Largest node count per `(t, x)` axis.
pub const MAX_SPLIT_AXIS: usize = 16;
/// Largest number of momentum nodes.
pub const MAX_SPLIT_MOMENTA: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitDiagnostic {
    pub i1: f64,
    pub i2: f64,
    /// `Σ |ξ| |S₁ + S₂|² Δξ`, the squared `H^{1/2}` norm of the quadrature average.
    pub unsplit: f64,
    /// `2 Σ |ξ| Re(S₁ S̄₂) Δξ`.
    pub cross: f64,
    /// `‖û‖²` over `(τ, z, p)`.
    pub a: f64,
    /// `‖σ û‖²` over `(τ, z, p)`.
    pub b: f64,
    pub alpha: f64,
    pub c_r: f64,
    pub bound1: f64,
    pub bound2: f64,
    pub momenta: usize,
}

impl SplitDiagnostic {
    /// `C_R α A + (2C_R/α) B`.
    pub fn combined_bound(&self, alpha: f64) -> f64 {
        self.c_r * alpha * self.a + 2.0 * self.c_r * self.b / alpha
    }

    /// `|I₁ + I₂ - unsplit| / unsplit` (zero for a zero field).
    pub fn partition_error(&self) -> f64 {
        if self.unsplit == 0.0 {
            return (self.i1 + self.i2).abs();
        }
        (self.i1 + self.i2 - self.unsplit).abs() / self.unsplit
    }

    /// Checks derived from one diagnostic run.
    pub fn reports(&self) -> Vec<BoundReport> {
        let at = self.combined_bound(self.alpha);
        let tol = 1e-12 * at;
        let worst_neighbour = self.combined_bound(2.0 * self.alpha).min(self.combined_bound(0.5 * self.alpha));
        vec![
            BoundReport::new("split/partition", self.partition_error(), 1e-10, 0.0)
                .with("i1", self.i1)
                .with("i2", self.i2)
                .with("unsplit", self.unsplit)
                .with("cross", self.cross),
            BoundReport::new("split/parallelogram", self.unsplit, 2.0 * (self.i1 + self.i2), 0.0),
            BoundReport::new("split/i1", self.i1, self.bound1, 0.0).with("alpha", self.alpha),
            BoundReport::new("split/i2", self.i2, self.bound2, 0.0).with("alpha", self.alpha),
            BoundReport::new("split/argmin", at, worst_neighbour + tol, 0.0)
                .with("alpha", self.alpha)
                .with("at_double", self.combined_bound(2.0 * self.alpha))
                .with("at_half", self.combined_bound(0.5 * self.alpha)),
        ]
    }
}

/// `α = √(B/A)`, the balancing point of the two bounds used in the estimate.
pub fn balanced_alpha(a: f64, b: f64) -> f64 {
    if a > 0.0 && b > 0.0 {
        (b / a).sqrt()
    } else {
        1.0
    }
}

fn check_caps(spec: &GridSpec) -> Result<()> {
    let axes = std::iter::once(spec.nt).chain(spec.nx);
    if axes.into_iter().any(|n| n > MAX_SPLIT_AXIS) {
        return Err(Error::CostGuard(format!(
            "split diagnostic allows at most {MAX_SPLIT_AXIS} nodes per axis"
        )));
    }
    let m: usize = spec.ball.iter().product();
    if m > MAX_SPLIT_MOMENTA {
        return Err(Error::CostGuard(format!(
            "split diagnostic allows at most {MAX_SPLIT_MOMENTA} momentum nodes, got {m}"
        )));
    }
    Ok(())
}

fn norm3(z: &[f64; 3]) -> f64 {
    (z[0] * z[0] + z[1] * z[1] + z[2] * z[2]).sqrt()
}

fn symbol(tau: f64, z: &[f64; 3], v: &Vec3) -> f64 {
    tau + v[0] * z[0] + v[1] * z[1] + v[2] * z[2]
}

/// Runs the split for the undamped solution of `f` at `alpha` (the balanced
/// value when `None`). The grid layout, time rule and momentum nodes come from
/// `spec`; `padding` is the FFT zero-padding factor.
pub fn fourier_split_diag(
    f: ScalarField7,
    alpha: Option<f64>,
    spec: &GridSpec,
    padding: usize,
    radius: f64,
) -> Result<SplitDiagnostic> {
    check_caps(spec)?;
    if let Some(a) = alpha {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::invalid("alpha", "must be positive"));
        }
    }
    let src = *f.support();
    let (dims, origin, spacing) = grid_layout(&src, spec)?;
    let rule = CompositeGaussLegendre::new(spec.time_order, src.horizon / spec.time_panels as f64)?;
    let ball = BallRule::new(src.p_radius, spec.ball[0], spec.ball[1], spec.ball[2])?;
    let u = duhamel_solve_with(f, false, rule)?;
    let cr = c_r(radius)?;

    let grids: Vec<AverageGrid4> = ball
        .nodes()
        .iter()
        .map(|(p, _)| AverageGrid4::from_fn(dims, origin, spacing, src.horizon, |t, x| u.eval(t, x, p)))
        .collect::<Result<_>>()?;
    let vels: Vec<Vec3> = ball.nodes().iter().map(|(p, _)| velocity(p)).collect();
    let weights: Vec<f64> = ball.nodes().iter().map(|(_, w)| *w).collect();

    let peak = grids.iter().map(|g| g.max_abs()).fold(0.0, f64::max);
    for g in &grids {
        let edge = g.boundary_max_all();
        if edge > BOUNDARY_TOLERANCE * peak {
            return Err(Error::BoundaryNotVanishing {
                boundary_max: edge,
                allowed: BOUNDARY_TOLERANCE * peak,
            });
        }
    }

    let mut a = 0.0;
    let mut b = 0.0;
    let mut spectra_dims = None;
    for ((g, v), w) in grids.iter().zip(&vels).zip(&weights) {
        let sp = fft4_unchecked(g, padding)?;
        let cell = sp.cell_volume();
        let mut na = 0.0;
        let mut nb = 0.0;
        for (flat, c) in sp.coeffs.iter().enumerate() {
            let n2 = c.norm_sqr();
            if n2 == 0.0 {
                continue;
            }
            let (tau, z) = sp.frequencies(flat);
            let sig = symbol(tau, &z, v);
            na += n2;
            nb += sig * sig * n2;
        }
        a += w * na * cell;
        b += w * nb * cell;
        spectra_dims = Some(sp.dims);
    }
    let alpha = alpha.unwrap_or_else(|| balanced_alpha(a, b));

    let total: usize = spectra_dims.map(|d| d.iter().product()).unwrap_or(0);
    let zero = Complex64::new(0.0, 0.0);
    let mut s1 = vec![zero; total];
    let mut s2 = vec![zero; total];
    let mut last: Option<SpectralGrid4> = None;
    for ((g, v), w) in grids.iter().zip(&vels).zip(&weights) {
        let sp = fft4_unchecked(g, padding)?;
        for (flat, c) in sp.coeffs.iter().enumerate() {
            let (tau, z) = sp.frequencies(flat);
            let target = if symbol(tau, &z, v).abs() <= alpha { &mut s1 } else { &mut s2 };
            target[flat] += c * w;
        }
        last = Some(sp);
    }
    let (mut i1, mut i2, mut unsplit, mut cross) = (0.0, 0.0, 0.0, 0.0);
    if let Some(sp) = last {
        let cell = sp.cell_volume();
        for flat in 0..total {
            let (tau, z) = sp.frequencies(flat);
            let xi = tau.hypot(norm3(&z));
            i1 += xi * s1[flat].norm_sqr();
            i2 += xi * s2[flat].norm_sqr();
            unsplit += xi * (s1[flat] + s2[flat]).norm_sqr();
            cross += 2.0 * xi * (s1[flat] * s2[flat].conj()).re;
        }
        i1 *= cell;
        i2 *= cell;
        unsplit *= cell;
        cross *= cell;
    }
    Ok(SplitDiagnostic {
        i1,
        i2,
        unsplit,
        cross,
        a,
        b,
        alpha,
        c_r: cr,
        bound1: cr * alpha * a,
        bound2: 2.0 * cr * b / alpha,
        momenta: grids.len(),
    })
}
