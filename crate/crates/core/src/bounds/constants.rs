//! Closed-form constants of the `L^q`, `H^{1/2}` and `W^{s,p}` estimates.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::geometry::c_r;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantsRegistry {
    pub horizon: f64,
    pub radius: f64,
    pub q: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub c_r: f64,
}

fn check_domain(horizon: f64, radius: f64) -> Result<()> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::invalid("T", "must be positive and finite"));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::invalid("R", "must be positive and finite"));
    }
    Ok(())
}

/// `((q-1)/q)^{(q-1)/q}`, the Hölder factor shared by `C1` and `C2`.
fn holder_factor(q: f64) -> f64 {
    let a = (q - 1.0) / q;
    a.powf(a)
}

fn ball_vol(radius: f64) -> f64 {
    4.0 * PI * radius.powi(3) / 3.0
}

/// Every constant for `(T, R, q)`; `q` must lie in `(1, ∞)`.
pub fn constants(horizon: f64, radius: f64, q: f64) -> Result<ConstantsRegistry> {
    check_domain(horizon, radius)?;
    if !(q > 1.0) || !q.is_finite() {
        return Err(Error::invalid("q", "C1 and C2 need a finite q > 1"));
    }
    let h = holder_factor(q);
    let vol = ball_vol(radius);
    let cr = c_r(radius)?;
    Ok(ConstantsRegistry {
        horizon,
        radius,
        q,
        c1: h * (1.0 - (-horizon).exp()),
        c2: vol.powf(1.0 - 1.0 / q) * horizon.powf(1.0 / q) * h,
        c3: horizon,
        c4: vol * horizon,
        c5: c5(horizon, radius)?,
        c6: c6(horizon, radius)?,
        c_r: cr,
    })
}

/// `C5 = √6 (1 + T/2)^{1/2} C_R^{1/2}`.
pub fn c5(horizon: f64, radius: f64) -> Result<f64> {
    check_domain(horizon, radius)?;
    Ok(6f64.sqrt() * (1.0 + horizon / 2.0).sqrt() * c_r(radius)?.sqrt())
}

/// `C6 = max(4πR³/3, T, C4, C5)`; independent of `q`.
pub fn c6(horizon: f64, radius: f64) -> Result<f64> {
    let c5 = c5(horizon, radius)?;
    let vol = ball_vol(radius);
    Ok(vol.max(horizon).max(vol * horizon).max(c5))
}

/// Constant of `‖ũ‖_q ≤ C‖h‖_q`: `C3` at `q = 1`, `C2` for `1 < q < ∞` and
/// `C4` at `q = ∞`.
pub fn lq_constant(horizon: f64, radius: f64, q: f64) -> Result<f64> {
    check_domain(horizon, radius)?;
    if q == 1.0 {
        Ok(horizon)
    } else if q == f64::INFINITY {
        Ok(ball_vol(radius) * horizon)
    } else {
        Ok(constants(horizon, radius, q)?.c2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_domain_values() {
        let c = constants(1.0, 1.0, 2.0).unwrap();
        assert_eq!(c.c3, 1.0);
        assert!((c.c4 - 4.18879020478639).abs() < 1e-12);
        assert!((c.c_r - 32.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((c.c5 - 3.0 * c.c_r.sqrt()).abs() < 1e-12);
        assert!((c.c5 - 20.182).abs() < 1e-3);
        assert_eq!(c.c6, c.c5);
    }

    #[test]
    fn c6_dominates_its_arguments() {
        for &(t, r) in &[(0.5, 0.3), (1.0, 1.0), (4.0, 2.0), (10.0, 0.1)] {
            let c = constants(t, r, 3.0).unwrap();
            for v in [ball_vol(r), t, c.c4, c.c5] {
                assert!(c.c6 >= v);
            }
        }
    }

    #[test]
    fn rejects_bad_q() {
        assert!(constants(1.0, 1.0, 1.0).is_err());
        assert!(constants(1.0, 1.0, 0.5).is_err());
        assert!(constants(1.0, 1.0, f64::INFINITY).is_err());
        assert!(constants(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn lq_constant_endpoints() {
        assert_eq!(lq_constant(2.0, 1.0, 1.0).unwrap(), 2.0);
        assert!((lq_constant(2.0, 1.0, f64::INFINITY).unwrap() - 8.0 * PI / 3.0).abs() < 1e-12);
        let c2 = lq_constant(1.0, 1.0, 2.0).unwrap();
        assert!((c2 - (4.0 * PI / 3.0).sqrt() * 0.5f64.sqrt()).abs() < 1e-12);
    }
}
