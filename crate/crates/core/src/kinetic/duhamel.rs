//! Explicit solution of the transport equation along characteristics.
//!
//! Undamped: `u(t,x,p) = ∫₀ᵗ f(s, x + v(s-t), p) ds` solves `∂ₜu + v·∇ₓu = f`.
//! Damped: `u(t,x,p) = ∫₀ᵗ e^{s-t} h(s, x + v(s-t), p) ds` solves
//! `u + ∂ₜu + v·∇ₓu = h`. Both start from `u(0) = 0`; `v = p/p₀`.

use crate::kinetic::field::{PhaseField, ScalarField7, Smoothness};
use crate::kinetic::momentum::velocity;
use crate::kinetic::support::SupportBox;
use crate::numerics::CompositeGaussLegendre;
use crate::{Result, Vec3};

/// Panel count per unit horizon used by [`duhamel_solve`].
pub const DEFAULT_PANELS_PER_HORIZON: usize = 64;

pub struct DuhamelSolution {
    source: ScalarField7,
    damped: bool,
    rule: CompositeGaussLegendre,
    support: SupportBox,
}

impl std::fmt::Debug for DuhamelSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DuhamelSolution")
            .field("source", &self.source.label())
            .field("damped", &self.damped)
            .field("rule", &self.rule)
            .finish()
    }
}

/// Solves with composite Gauss–Legendre of order `quad_order` on panels of
/// width at most `T/64`.
pub fn duhamel_solve(f: ScalarField7, damped: bool, quad_order: usize) -> Result<DuhamelSolution> {
    let panel = f.support().horizon / DEFAULT_PANELS_PER_HORIZON as f64;
    duhamel_solve_with(f, damped, CompositeGaussLegendre::new(quad_order, panel)?)
}

pub fn duhamel_solve_with(f: ScalarField7, damped: bool, rule: CompositeGaussLegendre) -> Result<DuhamelSolution> {
    let s = *f.support();
    let support = SupportBox::new(s.horizon, (s.t_range.0, s.horizon), s.x_lo, s.x_hi, s.p_radius)?.dilate_x(s.horizon);
    Ok(DuhamelSolution {
        source: f,
        damped,
        rule,
        support,
    })
}

impl DuhamelSolution {
    pub fn source(&self) -> &ScalarField7 {
        &self.source
    }

    pub fn is_damped(&self) -> bool {
        self.damped
    }

    pub fn rule(&self) -> &CompositeGaussLegendre {
        &self.rule
    }

    /// Sub-interval of `[0, t]` on which the integrand can be nonzero: the
    /// source time window intersected with the times at which the
    /// characteristic through `(t, x)` crosses the source x-box.
    pub fn active_interval(&self, t: f64, x: &Vec3, v: &Vec3) -> Option<(f64, f64)> {
        let src = self.source.support();
        let mut lo = src.t_range.0.max(0.0);
        let mut hi = src.t_range.1.min(t);
        for k in 0..3 {
            // x_k + v_k (s - t) ∈ [a, b]
            let (a, b) = (src.x_lo[k], src.x_hi[k]);
            if v[k].abs() < 1e-300 {
                if x[k] < a || x[k] > b {
                    return None;
                }
                continue;
            }
            let s1 = t + (a - x[k]) / v[k];
            let s2 = t + (b - x[k]) / v[k];
            lo = lo.max(s1.min(s2));
            hi = hi.min(s1.max(s2));
        }
        (hi > lo).then_some((lo, hi))
    }

    /// Evaluation with a precomputed velocity; `p` must satisfy `v = velocity(p)`.
    pub fn eval_with_velocity(&self, t: f64, x: &Vec3, p: &Vec3, v: &Vec3) -> f64 {
        if self.source.vanishes_at_momentum(p) {
            return 0.0;
        }
        let Some((a, b)) = self.active_interval(t, x, v) else {
            return 0.0;
        };
        let f = &self.source;
        if self.damped {
            self.rule.integrate(a, b, |s| {
                let dt = s - t;
                let y = [x[0] + v[0] * dt, x[1] + v[1] * dt, x[2] + v[2] * dt];
                dt.exp() * f.eval(s, &y, p)
            })
        } else {
            self.rule.integrate(a, b, |s| {
                let dt = s - t;
                let y = [x[0] + v[0] * dt, x[1] + v[1] * dt, x[2] + v[2] * dt];
                f.eval(s, &y, p)
            })
        }
    }
}

impl PhaseField for DuhamelSolution {
    fn eval(&self, t: f64, x: &Vec3, p: &Vec3) -> f64 {
        let r = self.source.support().p_radius;
        if p[0] * p[0] + p[1] * p[1] + p[2] * p[2] > r * r || t <= 0.0 {
            return 0.0;
        }
        self.eval_with_velocity(t, x, p, &velocity(p))
    }
    fn support(&self) -> &SupportBox {
        &self.support
    }
    fn smoothness(&self) -> Smoothness {
        self.source.smoothness()
    }
    fn vanishes_at_momentum(&self, p: &Vec3) -> bool {
        self.source.vanishes_at_momentum(p)
    }
    fn label(&self) -> String {
        let kind = if self.damped { "damped" } else { "undamped" };
        format!("duhamel[{kind}]({})", self.source.label())
    }
}
