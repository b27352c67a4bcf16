use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::numerics::stream_rng;
use crate::{Error, Result, Vec3};

/// Unit vector `(e', e) ∈ S³`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction4 {
    pub e_prime: f64,
    pub e: Vec3,
}

impl Direction4 {
    /// Requires `|e|² + e'² = 1` within `1e-12`.
    pub fn new(e_prime: f64, e: Vec3) -> Result<Self> {
        let n2 = e_prime * e_prime + e[0] * e[0] + e[1] * e[1] + e[2] * e[2];
        if !((n2 - 1.0).abs() <= 1e-12) {
            return Err(Error::invalid("direction", format!("|e|^2 + e'^2 = {n2}, expected 1")));
        }
        Ok(Direction4 { e_prime, e })
    }

    /// Normalizes a nonzero 4-vector `(e', e)`.
    pub fn normalized(e_prime: f64, e: Vec3) -> Result<Self> {
        let n = (e_prime * e_prime + e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::invalid("direction", "cannot normalize a zero vector"));
        }
        Ok(Direction4 {
            e_prime: e_prime / n,
            e: [e[0] / n, e[1] / n, e[2] / n],
        })
    }

    /// `|e|`.
    pub fn e_norm(&self) -> f64 {
        (self.e[0] * self.e[0] + self.e[1] * self.e[1] + self.e[2] * self.e[2]).sqrt()
    }

    /// Same `e'`, spatial part rotated by `rot`.
    pub fn rotated(&self, rot: &[[f64; 3]; 3]) -> Direction4 {
        let e = std::array::from_fn(|i| (0..3).map(|j| rot[i][j] * self.e[j]).sum());
        Direction4 {
            e_prime: self.e_prime,
            e,
        }
    }

    /// The reduced direction `(e', (|e|, 0, 0))`.
    pub fn aligned(&self) -> Direction4 {
        Direction4 {
            e_prime: self.e_prime,
            e: [self.e_norm(), 0.0, 0.0],
        }
    }
}

/// Uniform point on `S³` from normalized Gaussians; depends only on `seed`.
pub fn sample_direction4(seed: u64) -> Direction4 {
    sample_on_stream(seed, 0)
}

/// `count` independent uniform directions, direction `k` from stream `k`.
pub fn sample_directions(count: usize, seed: u64) -> Vec<Direction4> {
    (0..count).map(|k| sample_on_stream(seed, k as u64)).collect()
}

fn sample_on_stream(seed: u64, stream: u64) -> Direction4 {
    let mut rng = stream_rng(seed, stream);
    loop {
        let g: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
        if let Ok(d) = Direction4::normalized(g[0], [g[1], g[2], g[3]]) {
            return d;
        }
    }
}

/// Uniform rotation of `R³` from a unit quaternion.
pub fn random_rotation(seed: u64) -> [[f64; 3]; 3] {
    let q = sample_on_stream(seed, 1 << 40);
    let (w, x, y, z) = (q.e_prime, q.e[0], q.e[1], q.e[2]);
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - z * w), 2.0 * (x * z + y * w)],
        [2.0 * (x * y + z * w), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - x * w)],
        [2.0 * (x * z - y * w), 2.0 * (y * z + x * w), 1.0 - 2.0 * (x * x + y * y)],
    ]
}
