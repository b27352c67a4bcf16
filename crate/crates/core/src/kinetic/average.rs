//! Momentum averaging and materialization of `ũ` on a uniform `(t, x)` grid.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::kinetic::duhamel::{duhamel_solve_with, DuhamelSolution};
use crate::kinetic::field::{PhaseField, ScalarField7};
use crate::kinetic::momentum::velocity;
use crate::kinetic::support::SupportBox;
use crate::numerics::{BallRule, CompositeGaussLegendre, QuadratureRule};
use crate::{Error, Result, Vec3};

/// Smallest accepted node count per axis.
pub const MIN_NODES: usize = 8;

/// `∫_{B_R} u(t, x, p) dp` by the product rule `ball`.
pub fn momentum_average(u: &dyn PhaseField, t: f64, x: &Vec3, ball: &BallRule) -> f64 {
    ball.integrate(|p| u.eval(t, x, p))
}

/// Resolution and quadrature settings for [`materialize_average`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// Nodes on `[0, T]`.
    pub nt: usize,
    /// Nodes per spatial axis.
    pub nx: [usize; 3],
    /// Optional fixed spatial box to dilate instead of the source x-box.
    #[serde(default)]
    pub frame: Option<(Vec3, Vec3)>,
    /// Gauss–Legendre order of the time quadrature.
    pub time_order: usize,
    /// Time panels per horizon.
    pub time_panels: usize,
    /// Radial, polar and azimuthal node counts of the ball rule.
    pub ball: [usize; 3],
}

impl GridSpec {
    pub fn cube(nt: usize, nx: usize) -> Self {
        GridSpec {
            nt,
            nx: [nx; 3],
            frame: None,
            time_order: 6,
            time_panels: 64,
            ball: [32, 32, 64],
        }
    }

    pub fn with_ball(mut self, ball: [usize; 3]) -> Self {
        self.ball = ball;
        self
    }

    pub fn with_time_rule(mut self, order: usize, panels: usize) -> Self {
        self.time_order = order;
        self.time_panels = panels;
        self
    }

    pub fn with_frame(mut self, lo: Vec3, hi: Vec3) -> Self {
        self.frame = Some((lo, hi));
        self
    }

    pub fn validate(&self) -> Result<()> {
        let small = std::iter::once(self.nt).chain(self.nx).any(|n| n < MIN_NODES);
        if small {
            return Err(Error::GridTooSmall(format!(
                "need at least {MIN_NODES} nodes per axis, got t={} x={:?}",
                self.nt, self.nx
            )));
        }
        if self.time_panels == 0 {
            return Err(Error::invalid("time_panels", "must be positive"));
        }
        Ok(())
    }
}

/// One uniform axis: `origin + i·spacing` for `i < n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub origin: f64,
    pub spacing: f64,
    pub n: usize,
}

impl GridAxis {
    pub fn node(&self, i: usize) -> f64 {
        self.origin + i as f64 * self.spacing
    }

    pub fn end(&self) -> f64 {
        self.node(self.n - 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub damped: bool,
    pub ball_rule: QuadratureRule,
    pub time_rule: QuadratureRule,
    pub source: String,
}

impl Default for GridMeta {
    fn default() -> Self {
        GridMeta {
            damped: false,
            ball_rule: QuadratureRule::Trapezoid { nodes: 0 },
            time_rule: QuadratureRule::Trapezoid { nodes: 0 },
            source: String::new(),
        }
    }
}

/// Samples of `ũ(t, x)`, row-major in `(t, x₁, x₂, x₃)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AverageGrid4 {
    pub dims: [usize; 4],
    pub origin: [f64; 4],
    pub spacing: [f64; 4],
    pub horizon: f64,
    pub values: Vec<f64>,
    pub meta: GridMeta,
}

impl AverageGrid4 {
    /// Grid filled with zeros.
    pub fn zeros(dims: [usize; 4], origin: [f64; 4], spacing: [f64; 4], horizon: f64) -> Result<Self> {
        if dims.iter().any(|&n| n < 2) {
            return Err(Error::GridTooSmall(format!("dims {dims:?}")));
        }
        if spacing.iter().any(|&h| !(h > 0.0) || !h.is_finite()) {
            return Err(Error::invalid("spacing", "must be positive"));
        }
        Ok(AverageGrid4 {
            dims,
            origin,
            spacing,
            horizon,
            values: vec![0.0; dims.iter().product()],
            meta: GridMeta::default(),
        })
    }

    /// Grid sampled from a closure of `(t, x)`.
    pub fn from_fn<F>(dims: [usize; 4], origin: [f64; 4], spacing: [f64; 4], horizon: f64, f: F) -> Result<Self>
    where
        F: Fn(f64, &Vec3) -> f64 + Sync,
    {
        let mut g = Self::zeros(dims, origin, spacing, horizon)?;
        let snapshot = g.clone();
        g.values = (0..g.len())
            .into_par_iter()
            .map(|i| {
                let (t, x) = snapshot.coords(i);
                f(t, &x)
            })
            .collect();
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn axis(&self, k: usize) -> GridAxis {
        GridAxis {
            origin: self.origin[k],
            spacing: self.spacing[k],
            n: self.dims[k],
        }
    }

    #[inline]
    pub fn index(&self, i: [usize; 4]) -> usize {
        ((i[0] * self.dims[1] + i[1]) * self.dims[2] + i[2]) * self.dims[3] + i[3]
    }

    #[inline]
    pub fn unravel(&self, mut flat: usize) -> [usize; 4] {
        let mut out = [0; 4];
        for k in (0..4).rev() {
            out[k] = flat % self.dims[k];
            flat /= self.dims[k];
        }
        out
    }

    pub fn get(&self, i: [usize; 4]) -> f64 {
        self.values[self.index(i)]
    }

    /// `(t, x)` of flat node `flat`.
    pub fn coords(&self, flat: usize) -> (f64, Vec3) {
        let i = self.unravel(flat);
        let c = |k: usize| self.origin[k] + i[k] as f64 * self.spacing[k];
        (c(0), [c(1), c(2), c(3)])
    }

    /// `Δt·Δx₁·Δx₂·Δx₃`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, c: f64) -> AverageGrid4 {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= c);
        out
    }

    fn on_face(&self, i: &[usize; 4], axes: std::ops::Range<usize>) -> bool {
        axes.into_iter().any(|k| i[k] == 0 || i[k] + 1 == self.dims[k])
    }

    /// Largest `|value|` on the outer layer of the spatial faces.
    pub fn boundary_max_x(&self) -> f64 {
        self.boundary_max(1..4)
    }

    /// Largest `|value|` on the outer layer of every face, time included.
    pub fn boundary_max_all(&self) -> f64 {
        self.boundary_max(0..4)
    }

    fn boundary_max(&self, axes: std::ops::Range<usize>) -> f64 {
        let mut m: f64 = 0.0;
        for (flat, v) in self.values.iter().enumerate() {
            if v.abs() > m && self.on_face(&self.unravel(flat), axes.clone()) {
                m = v.abs();
            }
        }
        m
    }

    /// Fails unless every face value is at most `rel_tol · max|values|`.
    pub fn check_vanishing_boundary(&self, rel_tol: f64) -> Result<()> {
        let b = self.boundary_max_all();
        let allowed = rel_tol * self.max_abs();
        if b > allowed {
            return Err(Error::BoundaryNotVanishing {
                boundary_max: b,
                allowed,
            });
        }
        Ok(())
    }
}

/// Spatial axes for a source x-box `[lo, hi]`: the box dilated by `T` plus
/// one cell of padding on each side.
fn spatial_axes(lo: &Vec3, hi: &Vec3, horizon: f64, nx: &[usize; 3]) -> [GridAxis; 3] {
    std::array::from_fn(|k| {
        let dx = (hi[k] - lo[k] + 2.0 * horizon) / (nx[k] - 3) as f64;
        GridAxis {
            origin: lo[k] - horizon - dx,
            spacing: dx,
            n: nx[k],
        }
    })
}

/// `(dims, origin, spacing)` of a grid.
pub type Layout = ([usize; 4], [f64; 4], [f64; 4]);

fn layout(lo: &Vec3, hi: &Vec3, horizon: f64, spec: &GridSpec) -> Layout {
    let xa = spatial_axes(lo, hi, horizon, &spec.nx);
    let dt = horizon / (spec.nt - 1) as f64;
    (
        [spec.nt, spec.nx[0], spec.nx[1], spec.nx[2]],
        [0.0, xa[0].origin, xa[1].origin, xa[2].origin],
        [dt, xa[0].spacing, xa[1].spacing, xa[2].spacing],
    )
}

/// Dimensions, origin and spacing that [`materialize_average`] uses for a
/// source with support `src`.
pub fn grid_layout(src: &SupportBox, spec: &GridSpec) -> Result<Layout> {
    spec.validate()?;
    let (lo, hi) = frame_of(src, spec)?;
    Ok(layout(&lo, &hi, src.horizon, spec))
}

fn frame_of(src: &SupportBox, spec: &GridSpec) -> Result<(Vec3, Vec3)> {
    match spec.frame {
        Some((lo, hi)) => {
            if (0..3).any(|k| lo[k] > src.x_lo[k] || hi[k] < src.x_hi[k]) {
                return Err(Error::invalid("frame", "frame must contain the source x-box"));
            }
            Ok((lo, hi))
        }
        None => Ok((src.x_lo, src.x_hi)),
    }
}

/// Samples `ũ = ∫ duhamel_solve(f, damped) dp` on the grid described by `spec`.
pub fn materialize_average(f: ScalarField7, spec: &GridSpec, damped: bool) -> Result<AverageGrid4> {
    spec.validate()?;
    let src = *f.support();
    let horizon = src.horizon;
    let (lo, hi) = frame_of(&src, spec)?;
    materialize_on(f, spec, layout(&lo, &hi, horizon, spec), damped)
}

/// [`materialize_average`] on an explicit `(dims, origin, spacing)` layout;
/// the time axis may extend past `T`.
pub fn materialize_on(f: ScalarField7, spec: &GridSpec, layout: Layout, damped: bool) -> Result<AverageGrid4> {
    spec.validate()?;
    let (dims, origin, spacing) = layout;
    let src = *f.support();
    let horizon = src.horizon;
    let time_rule = CompositeGaussLegendre::new(spec.time_order, horizon / spec.time_panels as f64)?;
    let ball = BallRule::new(src.p_radius, spec.ball[0], spec.ball[1], spec.ball[2])?;
    let label = f.label();
    let u = duhamel_solve_with(f, damped, time_rule.clone())?;

    let mut grid = AverageGrid4::zeros(dims, origin, spacing, horizon)?;
    grid.meta = GridMeta {
        damped,
        ball_rule: ball.describe(),
        time_rule: time_rule.describe(),
        source: label,
    };

    let vels: Vec<Vec3> = ball.nodes().iter().map(|(p, _)| velocity(p)).collect();
    let reach = src.max_speed();
    let t0 = src.t_range.0;
    let shape = grid.clone();
    grid.values = (0..shape.len())
        .into_par_iter()
        .map(|flat| {
            let (t, x) = shape.coords(flat);
            node_average(&u, &ball, &vels, t, &x, t0, reach)
        })
        .collect();
    Ok(grid)
}

fn node_average(u: &DuhamelSolution, ball: &BallRule, vels: &[Vec3], t: f64, x: &Vec3, t0: f64, reach: f64) -> f64 {
    if t <= t0 || u.source().support().x_distance(x) > reach * (t - t0) {
        return 0.0;
    }
    ball.nodes()
        .iter()
        .zip(vels)
        .map(|((p, w), v)| w * u.eval_with_velocity(t, x, p, v))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinetic::bump::{bump_field, BumpParams};
    use crate::kinetic::duhamel::duhamel_solve;
    use crate::kinetic::field::{ConstantField, ZeroField};
    use crate::kinetic::support::SupportBox;
    use std::f64::consts::PI;

    fn domain() -> SupportBox {
        SupportBox::cube_domain(1.0, 0.1, 0.5, 1.0).unwrap()
    }

    fn small_spec() -> GridSpec {
        GridSpec::cube(8, 10).with_ball([6, 6, 12]).with_time_rule(4, 16)
    }

    #[test]
    fn constant_on_ball_averages_to_volume() {
        let c = ConstantField::new(1.0, domain());
        let ball = BallRule::standard(1.0).unwrap();
        let v = momentum_average(&c, 0.5, &[0.0; 3], &ball);
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_tiny_grids() {
        let spec = GridSpec::cube(7, 10);
        assert!(matches!(
            materialize_average(ZeroField::shared(domain()), &spec, false),
            Err(Error::GridTooSmall(_))
        ));
    }

    #[test]
    fn zero_source_gives_zero_grid() {
        let g = materialize_average(ZeroField::shared(domain()), &small_spec(), false).unwrap();
        assert!(g.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn interior_node_matches_direct_evaluation() {
        let f = bump_field(
            &domain(),
            BumpParams {
                t_center: 0.4,
                t_halfwidth: 0.2,
                x_center: [0.0; 3],
                x_radius: 0.3,
                p_center: [0.2, 0.0, 0.0],
                p_radius: 0.4,
                amplitude: 1.0,
            },
        )
        .unwrap()
        .shared();
        let spec = small_spec();
        let g = materialize_average(f.clone(), &spec, false).unwrap();
        assert_eq!(g.boundary_max_x(), 0.0);
        let idx = [4, 5, 5, 4];
        let (t, x) = g.coords(g.index(idx));
        let rule = CompositeGaussLegendre::new(4, 1.0 / 16.0).unwrap();
        let u = duhamel_solve_with(f.clone(), false, rule).unwrap();
        let ball = BallRule::new(f.support().p_radius, 6, 6, 12).unwrap();
        let direct = momentum_average(&u, t, &x, &ball);
        assert!(direct != 0.0);
        assert_eq!(direct.to_bits(), g.get(idx).to_bits());
        let _ = duhamel_solve(f, false, 4).unwrap();
    }
}
