//! Finite-difference residuals of the transport equation.

use serde::{Deserialize, Serialize};

use crate::kinetic::field::PhaseField;
use crate::kinetic::momentum::velocity;
use crate::{Error, Result, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub t: f64,
    pub x: Vec3,
    pub p: Vec3,
}

impl PhasePoint {
    pub fn new(t: f64, x: Vec3, p: Vec3) -> Self {
        PhasePoint { t, x, p }
    }
}

/// `∂ₜu + (p/p₀)·∇ₓu` by centered differences of step `h`.
pub fn transport_derivative(u: &dyn PhaseField, pt: &PhasePoint, h: f64) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::invalid("h_fd", "finite-difference step must be positive"));
    }
    let PhasePoint { t, x, p } = *pt;
    let v = velocity(&p);
    let mut d = (u.eval(t + h, &x, &p) - u.eval(t - h, &x, &p)) / (2.0 * h);
    for k in 0..3 {
        let mut xp = x;
        let mut xm = x;
        xp[k] += h;
        xm[k] -= h;
        d += v[k] * (u.eval(t, &xp, &p) - u.eval(t, &xm, &p)) / (2.0 * h);
    }
    Ok(d)
}

/// `∂ₜu + (p/p₀)·∇ₓu - f` at `pt`.
pub fn transport_residual(u: &dyn PhaseField, f: &dyn PhaseField, pt: &PhasePoint, h: f64) -> Result<f64> {
    Ok(transport_derivative(u, pt, h)? - f.eval(pt.t, &pt.x, &pt.p))
}

/// `u + ∂ₜu + (p/p₀)·∇ₓu - h` at `pt`.
pub fn damped_transport_residual(u: &dyn PhaseField, h_src: &dyn PhaseField, pt: &PhasePoint, h: f64) -> Result<f64> {
    Ok(u.eval(pt.t, &pt.x, &pt.p) + transport_derivative(u, pt, h)? - h_src.eval(pt.t, &pt.x, &pt.p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinetic::field::ZeroField;
    use crate::kinetic::support::SupportBox;

    #[test]
    fn zero_fields_have_zero_residual() {
        let z = ZeroField::new(SupportBox::cube_domain(1.0, 0.1, 1.0, 1.0).unwrap());
        let pt = PhasePoint::new(0.5, [0.1, 0.2, 0.3], [0.3, 0.0, 0.1]);
        assert_eq!(transport_residual(&z, &z, &pt, 1e-2).unwrap(), 0.0);
        assert_eq!(damped_transport_residual(&z, &z, &pt, 1e-2).unwrap(), 0.0);
        assert!(transport_residual(&z, &z, &pt, 0.0).is_err());
    }
}
