use serde::{Deserialize, Serialize};

use crate::kinetic::momentum::max_speed;
use crate::numerics::ball_volume;
use crate::{Error, Result, Vec3};

/// Compact support of a phase-space field: a time window inside `[0, T]`, an
/// axis-aligned box in `x` and the momentum ball `B_R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportBox {
    /// Time horizon `T`.
    pub horizon: f64,
    pub t_range: (f64, f64),
    pub x_lo: Vec3,
    pub x_hi: Vec3,
    pub p_radius: f64,
}

impl SupportBox {
    pub fn new(horizon: f64, t_range: (f64, f64), x_lo: Vec3, x_hi: Vec3, p_radius: f64) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::invalid("horizon", "T must be positive and finite"));
        }
        let (t0, t1) = t_range;
        if !(0.0 <= t0 && t0 < t1 && t1 <= horizon) {
            return Err(Error::invalid(
                "t_range",
                format!("need 0 <= t0 < t1 <= T, got [{t0}, {t1}] with T = {horizon}"),
            ));
        }
        for k in 0..3 {
            if !(x_lo[k] < x_hi[k]) || !x_lo[k].is_finite() || !x_hi[k].is_finite() {
                return Err(Error::invalid("x_box", format!("degenerate along axis {k}")));
            }
        }
        if !(p_radius > 0.0) || !p_radius.is_finite() {
            return Err(Error::invalid("p_radius", "R must be positive and finite"));
        }
        Ok(SupportBox {
            horizon,
            t_range,
            x_lo,
            x_hi,
            p_radius,
        })
    }

    /// The admissible region `[ε₀, T − ε₀] × x_box × B_R`; requires `0 < ε₀ < T/2`.
    pub fn domain(horizon: f64, eps0: f64, x_lo: Vec3, x_hi: Vec3, p_radius: f64) -> Result<Self> {
        if !(eps0 > 0.0 && eps0 < 0.5 * horizon) {
            return Err(Error::invalid("eps0", format!("need 0 < eps0 < T/2, got {eps0} with T = {horizon}")));
        }
        Self::new(horizon, (eps0, horizon - eps0), x_lo, x_hi, p_radius)
    }

    /// Cube `[-a, a]³` domain.
    pub fn cube_domain(horizon: f64, eps0: f64, half_extent: f64, p_radius: f64) -> Result<Self> {
        Self::domain(horizon, eps0, [-half_extent; 3], [half_extent; 3], p_radius)
    }

    pub fn t_len(&self) -> f64 {
        self.t_range.1 - self.t_range.0
    }

    pub fn x_volume(&self) -> f64 {
        (0..3).map(|k| self.x_hi[k] - self.x_lo[k]).product()
    }

    /// Lebesgue measure of the whole box `t × x × B_R`.
    pub fn volume(&self) -> f64 {
        self.t_len() * self.x_volume() * ball_volume(self.p_radius)
    }

    pub fn contains(&self, t: f64, x: &Vec3, p: &Vec3) -> bool {
        t >= self.t_range.0
            && t <= self.t_range.1
            && (0..3).all(|k| x[k] >= self.x_lo[k] && x[k] <= self.x_hi[k])
            && p[0] * p[0] + p[1] * p[1] + p[2] * p[2] <= self.p_radius * self.p_radius
    }

    /// Same box with the x-part grown by `d` along every axis.
    pub fn dilate_x(&self, d: f64) -> SupportBox {
        let mut out = *self;
        for k in 0..3 {
            out.x_lo[k] -= d;
            out.x_hi[k] += d;
        }
        out
    }

    /// Euclidean distance from `x` to the x-box (0 inside).
    pub fn x_distance(&self, x: &Vec3) -> f64 {
        let mut d2 = 0.0;
        for (k, &xk) in x.iter().enumerate() {
            let d = (self.x_lo[k] - xk).max(xk - self.x_hi[k]).max(0.0);
            d2 += d * d;
        }
        d2.sqrt()
    }

    pub fn max_speed(&self) -> f64 {
        max_speed(self.p_radius)
    }

    /// Whether `self` lies inside `outer` (time window, x-box and ball).
    pub fn fits_inside(&self, outer: &SupportBox) -> bool {
        const TOL: f64 = 1e-12;
        self.t_range.0 >= outer.t_range.0 - TOL
            && self.t_range.1 <= outer.t_range.1 + TOL
            && (0..3).all(|k| self.x_lo[k] >= outer.x_lo[k] - TOL && self.x_hi[k] <= outer.x_hi[k] + TOL)
            && self.p_radius <= outer.p_radius + TOL
    }

    /// Smallest box containing both.
    pub fn union(&self, other: &SupportBox) -> SupportBox {
        let mut out = *self;
        out.horizon = self.horizon.max(other.horizon);
        out.t_range = (self.t_range.0.min(other.t_range.0), self.t_range.1.max(other.t_range.1));
        for k in 0..3 {
            out.x_lo[k] = self.x_lo[k].min(other.x_lo[k]);
            out.x_hi[k] = self.x_hi[k].max(other.x_hi[k]);
        }
        out.p_radius = self.p_radius.max(other.p_radius);
        out
    }
}
