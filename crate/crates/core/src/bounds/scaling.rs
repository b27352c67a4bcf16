//! Dilation law of `ũ` under `u_λ(t, x, p) = u(λt, λx, p)`.
//!
//! `u_λ` solves the transport equation with source `f_λ = λ f(λt, λx, p)`, so
//! each `λ` re-runs the pipeline on `f_λ`. With [`ScalingFrame::Covariant`]
//! the grid for `λ` is the base grid with every coordinate divided by `λ`;
//! with [`ScalingFrame::Fixed`] one grid holds every dilated support, and the
//! most compressed field is sampled more coarsely. Inside `(0, T)` the norms
//! scale exactly:
//! `‖ũ_λ‖_{W^{s,p}} = λ^{s-4/p} ‖ũ‖_{W^{s,p}}` and `‖ũ_λ‖_p = λ^{-4/p} ‖ũ‖_p`.

use serde::{Deserialize, Serialize};

use crate::bounds::report::{BoundReport, Resources};
use crate::kinetic::{grid_layout, materialize_average, materialize_on, AverageGrid4, ScalarField7, ScaledField};
use crate::norms::{fft4_padded, hs_norm_fourier, lq_norm_avg, seminorm_mc, Variant};
use crate::{Error, Result, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalingFrame {
    /// Base layout of the undilated source, scaled by `1/λ`.
    #[default]
    Covariant,
    /// One layout containing every dilated x-box.
    Fixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub s: f64,
    pub p_exp: f64,
    /// `fourier` for `(p, s) = (2, 1/2)`, otherwise `double-integral`.
    pub seminorm: String,
    pub frame: ScalingFrame,
    pub lambdas: Vec<f64>,
    pub norms: Vec<f64>,
    pub lp_norms: Vec<f64>,
    pub slope: f64,
    pub target: f64,
    pub lp_slope: f64,
    pub lp_target: f64,
}

impl ScalingReport {
    /// Norms divided by their value at `λ = 1` (when sampled).
    pub fn ratios(&self) -> Option<Vec<f64>> {
        let i = self.lambdas.iter().position(|&l| l == 1.0)?;
        let base = self.norms[i];
        Some(self.norms.iter().map(|n| n / base).collect())
    }

    /// Slope deviations checked against `tol`.
    pub fn reports(&self, tol: f64) -> Vec<BoundReport> {
        let lam: Vec<serde_json::Value> = self.lambdas.iter().map(|&l| l.into()).collect();
        vec![
            BoundReport::new("scaling/seminorm-slope", (self.slope - self.target).abs(), tol, 0.0)
                .with("slope", self.slope)
                .with("target", self.target)
                .with("seminorm", self.seminorm.clone())
                .with("frame", format!("{:?}", self.frame).to_lowercase())
                .with("lambdas", lam.clone())
                .with("prefactor", "f_lambda = lambda * f(lambda t, lambda x, p)"),
            BoundReport::new("scaling/lp-slope", (self.lp_slope - self.lp_target).abs(), tol, 0.0)
                .with("slope", self.lp_slope)
                .with("target", self.lp_target)
                .with("lambdas", lam),
        ]
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Smallest box containing the x-box of `f` dilated by every `1/λ`.
fn common_frame(f: &ScalarField7, lambdas: &[f64]) -> (Vec3, Vec3) {
    let s = f.support();
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for &l in lambdas {
        for k in 0..3 {
            lo[k] = lo[k].min(s.x_lo[k] / l);
            hi[k] = hi[k].max(s.x_hi[k] / l);
        }
    }
    (lo, hi)
}

fn seminorm_of(grid: &AverageGrid4, s: f64, p_exp: f64, res: &Resources) -> Result<f64> {
    if p_exp == 2.0 && s == 0.5 {
        Ok(hs_norm_fourier(&fft4_padded(grid, res.padding)?, 0.5))
    } else {
        Ok(seminorm_mc(grid, s, p_exp, Variant::Paper, &res.pair_sampler())?.value)
    }
}

/// Fits the dilation exponents of `‖ũ_λ‖_{W^{s,p}}` and `‖ũ_λ‖_p` over `lambdas`
/// (each in `[1/2, 2]`, at least two distinct values).
pub fn scaling_experiment(
    f: ScalarField7,
    lambdas: &[f64],
    s: f64,
    p_exp: f64,
    frame: ScalingFrame,
    res: &Resources,
) -> Result<ScalingReport> {
    if lambdas.len() < 2 || lambdas.iter().any(|l| !(0.5..=2.0).contains(l)) {
        return Err(Error::invalid("lambdas", "need at least two values in [1/2, 2]"));
    }
    if lambdas.iter().all(|&l| l == lambdas[0]) {
        return Err(Error::invalid("lambdas", "values must not all coincide"));
    }
    if !(s > 0.0 && s < 1.0) || !(p_exp >= 1.0) || !p_exp.is_finite() {
        return Err(Error::invalid("s", "need 0 < s < 1 and finite p >= 1"));
    }
    let (lo, hi) = common_frame(&f, lambdas);
    let fixed = res.grid.clone().with_frame(lo, hi);
    let base = grid_layout(f.support(), &res.grid)?;
    let mut norms = Vec::with_capacity(lambdas.len());
    let mut lp_norms = Vec::with_capacity(lambdas.len());
    for &l in lambdas {
        let fl = ScaledField::source(f.clone(), l)?;
        let grid = match frame {
            ScalingFrame::Fixed => materialize_average(fl, &fixed, false)?,
            ScalingFrame::Covariant => {
                let (dims, origin, spacing) = base;
                let layout = (dims, origin.map(|o| o / l), spacing.map(|h| h / l));
                materialize_on(fl, &res.grid, layout, false)?
            }
        };
        norms.push(seminorm_of(&grid, s, p_exp, res)?);
        lp_norms.push(lq_norm_avg(&grid, p_exp)?);
    }
    if norms.iter().chain(&lp_norms).any(|n| !(*n > 0.0)) {
        return Err(Error::invalid("f", "scaling needs a field with nonzero average"));
    }
    Ok(ScalingReport {
        s,
        p_exp,
        seminorm: if p_exp == 2.0 && s == 0.5 { "fourier" } else { "double-integral" }.into(),
        frame,
        slope: loglog_slope(lambdas, &norms),
        target: s - 4.0 / p_exp,
        lp_slope: loglog_slope(lambdas, &lp_norms),
        lp_target: -4.0 / p_exp,
        lambdas: lambdas.to_vec(),
        norms,
        lp_norms,
    })
}
