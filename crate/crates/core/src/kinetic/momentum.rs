use crate::Vec3;

/// Dimensionless momentum `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Momentum(pub Vec3);

impl Momentum {
    pub fn energy(&self) -> f64 {
        energy(&self.0)
    }

    pub fn velocity(&self) -> Vec3 {
        velocity(&self.0)
    }

    pub fn speed(&self) -> f64 {
        let p = &self.0;
        (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt() / self.energy()
    }
}

impl From<Vec3> for Momentum {
    fn from(p: Vec3) -> Self {
        Momentum(p)
    }
}

/// `p₀ = sqrt(1 + |p|²)`.
#[inline]
pub fn energy(p: &Vec3) -> f64 {
    (1.0 + p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

/// Characteristic velocity `p / p₀`, always sub-luminal.
#[inline]
pub fn velocity(p: &Vec3) -> Vec3 {
    let inv = 1.0 / energy(p);
    [p[0] * inv, p[1] * inv, p[2] * inv]
}

/// Largest characteristic speed over the ball `|p| ≤ radius`.
#[inline]
pub fn max_speed(radius: f64) -> f64 {
    radius / (1.0 + radius * radius).sqrt()
}

/// `x + (p/p₀)·dt`.
#[inline]
pub fn characteristic_shift(x: &Vec3, p: &Vec3, dt: f64) -> Vec3 {
    let v = velocity(p);
    [x[0] + v[0] * dt, x[1] + v[1] * dt, x[2] + v[2] * dt]
}
