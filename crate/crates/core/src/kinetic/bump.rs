//! Smooth compactly supported test fields.
//!
//! Every factor is the standard bump `exp(-1/(1 - r²))` on `r < 1`. A
//! [`TensorBump`] multiplies one factor in `t`, one radial factor in `x` and
//! one radial factor in `p`. A [`TransportPair`] carries a profile `b` whose
//! `x`-factor drifts along the characteristic velocity together with its exact
//! source `f = ∂ₜb + (p/p₀)·∇ₓb`, so that the solution of the transport
//! equation with source `f` is known in closed form and vanishes near `t = 0`
//! and `t = T`.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::kinetic::field::{PhaseField, ScalarField7, Smoothness};
use crate::kinetic::momentum::{max_speed, velocity};
use crate::kinetic::support::SupportBox;
use crate::numerics::stream_rng;
use crate::{Error, Result, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BumpParams {
    pub t_center: f64,
    pub t_halfwidth: f64,
    pub x_center: Vec3,
    pub x_radius: f64,
    pub p_center: Vec3,
    pub p_radius: f64,
    pub amplitude: f64,
}

impl BumpParams {
    fn validate(&self) -> Result<()> {
        if !(self.t_halfwidth > 0.0 && self.x_radius > 0.0 && self.p_radius > 0.0) {
            return Err(Error::invalid("widths", "bump widths must be positive"));
        }
        let finite = [self.t_center, self.amplitude]
            .iter()
            .chain(self.x_center.iter())
            .chain(self.p_center.iter())
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::invalid("center", "bump parameters must be finite"));
        }
        Ok(())
    }

    fn p_extent(&self) -> f64 {
        norm(&self.p_center) + self.p_radius
    }
}

#[inline]
fn norm(v: &Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

#[inline]
fn dist2(a: &Vec3, b: &Vec3) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    d[0] * d[0] + d[1] * d[1] + d[2] * d[2]
}

/// `exp(-1/(1 - r²))` for `r² < 1`, else 0.
#[inline]
pub fn bump_factor(r2: f64) -> f64 {
    if r2 < 1.0 {
        (-1.0 / (1.0 - r2)).exp()
    } else {
        0.0
    }
}

/// `d/dr² exp(-1/(1 - r²)) = -exp(..)/(1 - r²)²`.
#[inline]
fn bump_factor_dr2(r2: f64) -> f64 {
    if r2 < 1.0 {
        let g = 1.0 - r2;
        -(-1.0 / g).exp() / (g * g)
    } else {
        0.0
    }
}

/// `A · φ(t) · φ(|x - x_c|) · φ(|p - p_c|)` with each factor rescaled to its width.
#[derive(Debug, Clone)]
pub struct TensorBump {
    params: BumpParams,
    support: SupportBox,
}

impl TensorBump {
    pub fn params(&self) -> &BumpParams {
        &self.params
    }

    pub fn t_factor(&self, t: f64) -> f64 {
        let r = (t - self.params.t_center) / self.params.t_halfwidth;
        bump_factor(r * r)
    }

    pub fn x_factor(&self, x: &Vec3) -> f64 {
        bump_factor(dist2(x, &self.params.x_center) / (self.params.x_radius * self.params.x_radius))
    }

    pub fn p_factor(&self, p: &Vec3) -> f64 {
        bump_factor(dist2(p, &self.params.p_center) / (self.params.p_radius * self.params.p_radius))
    }

    pub fn shared(self) -> ScalarField7 {
        Arc::new(self)
    }
}

impl PhaseField for TensorBump {
    fn eval(&self, t: f64, x: &Vec3, p: &Vec3) -> f64 {
        let ft = self.t_factor(t);
        if ft == 0.0 {
            return 0.0;
        }
        let fx = self.x_factor(x);
        if fx == 0.0 {
            return 0.0;
        }
        self.params.amplitude * ft * fx * self.p_factor(p)
    }
    fn support(&self) -> &SupportBox {
        &self.support
    }
    fn smoothness(&self) -> Smoothness {
        Smoothness::Smooth
    }
    fn label(&self) -> String {
        "bump".into()
    }
    fn vanishes_at_momentum(&self, p: &Vec3) -> bool {
        self.p_factor(p) == 0.0
    }
}

fn check_fits(support: &SupportBox, domain: &SupportBox) -> Result<()> {
    if support.fits_inside(domain) {
        Ok(())
    } else {
        Err(Error::invalid(
            "support",
            format!(
                "bump support t=[{:.4}, {:.4}] x=[{:?}, {:?}] |p|<={:.4} leaves the domain t=[{:.4}, {:.4}] x=[{:?}, {:?}] |p|<={:.4}",
                support.t_range.0,
                support.t_range.1,
                support.x_lo,
                support.x_hi,
                support.p_radius,
                domain.t_range.0,
                domain.t_range.1,
                domain.x_lo,
                domain.x_hi,
                domain.p_radius
            ),
        ))
    }
}

/// Builds a [`TensorBump`] and checks that its support lies inside `domain`.
pub fn bump_field(domain: &SupportBox, params: BumpParams) -> Result<TensorBump> {
    params.validate()?;
    let mut x_lo = params.x_center;
    let mut x_hi = params.x_center;
    for k in 0..3 {
        x_lo[k] -= params.x_radius;
        x_hi[k] += params.x_radius;
    }
    let t_range = (params.t_center - params.t_halfwidth, params.t_center + params.t_halfwidth);
    if t_range.0 < 0.0 || t_range.1 > domain.horizon {
        return Err(Error::invalid("support", "bump time window leaves [0, T]"));
    }
    let support = SupportBox::new(domain.horizon, t_range, x_lo, x_hi, params.p_extent())?;
    check_fits(&support, domain)?;
    Ok(TensorBump { params, support })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PairRole {
    Profile,
    Source,
}

/// One half of a [`TransportPair`].
#[derive(Debug, Clone)]
pub struct TransportedBump {
    params: BumpParams,
    drift: f64,
    role: PairRole,
    support: SupportBox,
}

impl PhaseField for TransportedBump {
    fn eval(&self, t: f64, x: &Vec3, p: &Vec3) -> f64 {
        let q = &self.params;
        let rt = (t - q.t_center) / q.t_halfwidth;
        let rt2 = rt * rt;
        if rt2 >= 1.0 {
            return 0.0;
        }
        let r2p = dist2(p, &q.p_center) / (q.p_radius * q.p_radius);
        if r2p >= 1.0 {
            return 0.0;
        }
        let v = velocity(p);
        let lag = self.drift * (t - q.t_center);
        let y = [
            x[0] - lag * v[0] - q.x_center[0],
            x[1] - lag * v[1] - q.x_center[1],
            x[2] - lag * v[2] - q.x_center[2],
        ];
        let wx2 = q.x_radius * q.x_radius;
        let r2x = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]) / wx2;
        if r2x >= 1.0 {
            return 0.0;
        }
        let phi_t = bump_factor(rt2);
        let phi_x = bump_factor(r2x);
        let phi_p = bump_factor(r2p);
        match self.role {
            PairRole::Profile => q.amplitude * phi_t * phi_x * phi_p,
            PairRole::Source => {
                let dphi_t = bump_factor_dr2(rt2) * 2.0 * rt / q.t_halfwidth;
                // ∇φ_x(y) = φ'(r²)·2y/w², dotted with v.
                let vy = v[0] * y[0] + v[1] * y[1] + v[2] * y[2];
                let v_grad = bump_factor_dr2(r2x) * 2.0 * vy / wx2;
                q.amplitude * phi_p * (dphi_t * phi_x + (1.0 - self.drift) * phi_t * v_grad)
            }
        }
    }
    fn support(&self) -> &SupportBox {
        &self.support
    }
    fn smoothness(&self) -> Smoothness {
        Smoothness::Smooth
    }
    fn vanishes_at_momentum(&self, p: &Vec3) -> bool {
        dist2(p, &self.params.p_center) >= self.params.p_radius * self.params.p_radius
    }
    fn label(&self) -> String {
        match self.role {
            PairRole::Profile => "transported-profile".into(),
            PairRole::Source => "transported-source".into(),
        }
    }
}

/// Exact solution/source pair of the undamped transport equation.
///
/// The profile is `b = A φ(t) φ(x - κ v(p)(t - t_c)) φ(p)` and the source is
/// `f = ∂ₜb + v·∇ₓb`. Since `b` vanishes at `t = 0`, `b` is the Duhamel
/// solution for `f`, and both vanish outside the time window of the bump.
#[derive(Debug, Clone)]
pub struct TransportPair {
    pub params: BumpParams,
    pub drift: f64,
    profile: Arc<TransportedBump>,
    source: Arc<TransportedBump>,
}

impl TransportPair {
    pub fn new(domain: &SupportBox, params: BumpParams, drift: f64) -> Result<Self> {
        params.validate()?;
        if !(0.0..=1.0).contains(&drift) {
            return Err(Error::invalid("drift", "must lie in [0, 1]"));
        }
        let reach = params.x_radius + drift * max_speed(params.p_extent()) * params.t_halfwidth;
        let mut x_lo = params.x_center;
        let mut x_hi = params.x_center;
        for k in 0..3 {
            x_lo[k] -= reach;
            x_hi[k] += reach;
        }
        let t_range = (params.t_center - params.t_halfwidth, params.t_center + params.t_halfwidth);
        if t_range.0 < 0.0 || t_range.1 > domain.horizon {
            return Err(Error::invalid("support", "bump time window leaves [0, T]"));
        }
        let support = SupportBox::new(domain.horizon, t_range, x_lo, x_hi, params.p_extent())?;
        check_fits(&support, domain)?;
        let make = |role| {
            Arc::new(TransportedBump {
                params,
                drift,
                role,
                support,
            })
        };
        Ok(TransportPair {
            params,
            drift,
            profile: make(PairRole::Profile),
            source: make(PairRole::Source),
        })
    }

    pub fn profile(&self) -> ScalarField7 {
        self.profile.clone()
    }

    pub fn source(&self) -> ScalarField7 {
        self.source.clone()
    }
}

fn random_params<R: Rng>(rng: &mut R, domain: &SupportBox, drift: f64) -> Result<BumpParams> {
    let t_halfwidth = rng.random_range(0.15..0.25) * domain.horizon;
    let x_radius = rng.random_range(0.25..0.4);
    let p_radius = rng.random_range(0.3..0.5) * domain.p_radius;
    let (a, b) = domain.t_range;
    if b - a <= 2.0 * t_halfwidth {
        return Err(Error::invalid("domain", "time window too short for the bump family"));
    }
    let t_center = rng.random_range((a + t_halfwidth)..(b - t_halfwidth));

    let p_room = domain.p_radius - p_radius;
    let mut dir = [0.0; 3];
    let mut n2: f64 = 0.0;
    while !(n2 > 1e-12 && n2 <= 1.0) {
        for d in dir.iter_mut() {
            *d = rng.random_range(-1.0..1.0);
        }
        n2 = dir.iter().map(|d| d * d).sum();
    }
    let p_len = rng.random_range(0.0..0.6) * p_room;
    let scale = p_len / n2.sqrt();
    let p_center = [dir[0] * scale, dir[1] * scale, dir[2] * scale];

    let reach = x_radius + drift * max_speed(p_len + p_radius) * t_halfwidth;
    let mut x_center = [0.0; 3];
    for (k, c) in x_center.iter_mut().enumerate() {
        let lo = domain.x_lo[k] + reach;
        let hi = domain.x_hi[k] - reach;
        if lo > hi {
            return Err(Error::invalid("domain", "x box too small for the bump family"));
        }
        *c = if hi - lo > 1e-12 { rng.random_range(lo..hi) } else { 0.5 * (lo + hi) };
    }
    Ok(BumpParams {
        t_center,
        t_halfwidth,
        x_center,
        x_radius,
        p_center,
        p_radius,
        amplitude: 1.0,
    })
}

/// `count` seeded tensor bumps inside `domain`; bump `k` depends only on `(seed, k)`.
pub fn bump_sources(domain: &SupportBox, count: usize, seed: u64) -> Result<Vec<TensorBump>> {
    (0..count)
        .map(|k| {
            let mut rng = stream_rng(seed, k as u64);
            bump_field(domain, random_params(&mut rng, domain, 0.0)?)
        })
        .collect()
}

/// `count` seeded transport pairs inside `domain` with drift `κ ∈ [0.2, 0.8]`.
pub fn transported_sources(domain: &SupportBox, count: usize, seed: u64) -> Result<Vec<TransportPair>> {
    (0..count)
        .map(|k| {
            let mut rng = stream_rng(seed, k as u64 | 1 << 32);
            let drift = rng.random_range(0.2..0.8);
            TransportPair::new(domain, random_params(&mut rng, domain, drift)?, drift)
        })
        .collect()
}
