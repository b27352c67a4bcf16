//! The momentum ball `B_R`: volume, uniform points and a spherical product rule.

use std::f64::consts::PI;

use crate::numerics::quadrature::{GaussLegendre, QuadratureRule};
use crate::numerics::sobol::{sobol_stream, SamplerSpec};
use crate::{Error, Result, Vec3};

pub fn ball_volume(radius: f64) -> f64 {
    4.0 / 3.0 * PI * radius.powi(3)
}

/// `n` uniform points in `B_R` by rejection from the cube `[-R, R]³`.
///
/// The cube points are a digitally shifted Sobol stream keyed by `seed`, so
/// the set is unbiased and reproducible.
pub fn ball_points(radius: f64, n: usize, seed: u64) -> Result<Vec<Vec3>> {
    if n == 0 {
        return Err(Error::invalid("n", "need at least one point"));
    }
    if !(radius > 0.0) {
        return Err(Error::invalid("radius", "must be positive"));
    }
    let stream = sobol_stream(SamplerSpec::sobol(3, seed, n))?;
    let mut out = Vec::with_capacity(n);
    let mut u = [0.0; 3];
    let mut i = 0u64;
    let r2 = radius * radius;
    while out.len() < n {
        stream.fill(Some(0), i, &mut u);
        i += 1;
        let p = [
            radius * (2.0 * u[0] - 1.0),
            radius * (2.0 * u[1] - 1.0),
            radius * (2.0 * u[2] - 1.0),
        ];
        if p[0] * p[0] + p[1] * p[1] + p[2] * p[2] <= r2 {
            out.push(p);
        }
    }
    Ok(out)
}

/// Product rule on `B_R`: Gauss–Legendre in `r` (weight `r²`), Gauss–Legendre
/// in `cos θ`, trapezoid in `φ`.
#[derive(Debug, Clone)]
pub struct BallRule {
    radius: f64,
    radial: usize,
    polar: usize,
    azimuthal: usize,
    nodes: Vec<(Vec3, f64)>,
}

impl BallRule {
    pub fn new(radius: f64, radial: usize, polar: usize, azimuthal: usize) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::invalid("radius", "ball radius must be positive"));
        }
        if radial == 0 || polar == 0 || azimuthal == 0 {
            return Err(Error::invalid("ball_rule", "node counts must be positive"));
        }
        let gr = GaussLegendre::new(radial)?;
        let gc = GaussLegendre::new(polar)?;
        let dphi = 2.0 * PI / azimuthal as f64;
        let mut nodes = Vec::with_capacity(radial * polar * azimuthal);
        for (r, wr) in gr.mapped(0.0, radius) {
            for (c, wc) in gc.mapped(-1.0, 1.0) {
                let s = (1.0 - c * c).max(0.0).sqrt();
                for k in 0..azimuthal {
                    let phi = (k as f64 + 0.5) * dphi;
                    let p = [r * s * phi.cos(), r * s * phi.sin(), r * c];
                    nodes.push((p, wr * r * r * wc * dphi));
                }
            }
        }
        Ok(BallRule {
            radius,
            radial,
            polar,
            azimuthal,
            nodes,
        })
    }

    /// Default resolution: 32 radial × 32 polar × 64 azimuthal nodes.
    pub fn standard(radius: f64) -> Result<Self> {
        Self::new(radius, 32, 32, 64)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn nodes(&self) -> &[(Vec3, f64)] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn describe(&self) -> QuadratureRule {
        QuadratureRule::SphericalProduct {
            radial: self.radial,
            polar: self.polar,
            azimuthal: self.azimuthal,
            radius: self.radius,
        }
    }

    pub fn integrate<F: FnMut(&Vec3) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().map(|(p, w)| w * f(p)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_stay_in_ball_and_are_deterministic() {
        let a = ball_points(1.5, 5000, 3).unwrap();
        assert!(a.iter().all(|p| (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt() <= 1.5));
        assert_eq!(a, ball_points(1.5, 5000, 3).unwrap());
        assert_ne!(a, ball_points(1.5, 5000, 4).unwrap());
    }

    #[test]
    fn radius_cubed_moment_is_one_half() {
        // E[r³]/R³ = ∫₀¹ 3 s² · s³ ds = 1/2 for the uniform ball.
        let r = 2.0;
        let n = 100_000;
        let pts = ball_points(r, n, 17).unwrap();
        let xs: Vec<f64> = pts
            .iter()
            .map(|p| (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).powf(1.5) / r.powi(3))
            .collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        let sigma = (var / n as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * sigma, "mean={mean} sigma={sigma}");
    }

    #[test]
    fn rule_integrates_constant_to_ball_volume() {
        let rule = BallRule::new(1.0, 8, 8, 16).unwrap();
        let v = rule.integrate(|_| 1.0);
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn rule_rejects_bad_parameters() {
        assert!(BallRule::new(0.0, 4, 4, 4).is_err());
        assert!(BallRule::new(1.0, 0, 4, 4).is_err());
    }
}
