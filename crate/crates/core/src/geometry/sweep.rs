//! Direction × ε sweeps for the slab measure and the weighted integral.

use serde::{Deserialize, Serialize};

use crate::geometry::direction::{sample_directions, Direction4};
use crate::geometry::slice::{c_r, lemma4_integral_mc, lemma4_integral_reduced, measure_slice_sweep};
use crate::numerics::parallel_map;
use crate::Result;

/// One CSV row: `(e', e₁, e₂, e₃, ε, R, measure, std_error, bound, margin)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Row {
    pub e_prime: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub epsilon: f64,
    pub radius: f64,
    pub measure: f64,
    pub std_error: f64,
    /// `C_R·ε`.
    pub bound: f64,
    /// `bound - measure`.
    pub margin: f64,
    /// Whether any sample point fell in the slab.
    pub nonempty: bool,
}

impl Lemma3Row {
    pub fn passes(&self) -> bool {
        self.measure <= self.bound + 3.0 * self.std_error
    }

    pub fn direction(&self) -> Direction4 {
        Direction4 {
            e_prime: self.e_prime,
            e: [self.e1, self.e2, self.e3],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma4Row {
    pub e_prime: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub epsilon: f64,
    pub radius: f64,
    pub reduced: f64,
    pub mc: f64,
    pub mc_std_error: f64,
    /// `2C_R/ε`.
    pub bound: f64,
    pub margin: f64,
}

impl Lemma4Row {
    pub fn bound_holds(&self) -> bool {
        self.reduced < self.bound
    }

    pub fn agrees(&self) -> bool {
        (self.mc - self.reduced).abs() <= 3.0 * self.mc_std_error
    }
}

/// Slab measures for `n_dirs` seeded directions over `eps`; direction `k`
/// uses point seed `seed + k`.
pub fn lemma3_sweep(radius: f64, n_dirs: usize, eps: &[f64], n_points: usize, seed: u64) -> Result<Vec<Lemma3Row>> {
    let cr = c_r(radius)?;
    let dirs: Vec<(usize, Direction4)> = sample_directions(n_dirs, seed).into_iter().enumerate().collect();
    let per_dir = parallel_map(&dirs, |(k, d)| -> Result<Vec<Lemma3Row>> {
        let est = measure_slice_sweep(d, eps, radius, n_points, seed.wrapping_add(*k as u64))?;
        Ok(eps
            .iter()
            .zip(est)
            .map(|(&e, m)| Lemma3Row {
                e_prime: d.e_prime,
                e1: d.e[0],
                e2: d.e[1],
                e3: d.e[2],
                epsilon: e,
                radius,
                measure: m.value,
                std_error: m.std_error,
                bound: cr * e,
                margin: cr * e - m.value,
                nonempty: m.hits > 0,
            })
            .collect())
    });
    let mut rows = Vec::with_capacity(n_dirs * eps.len());
    for r in per_dir {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Reduced quadrature and Monte-Carlo weighted integrals over the same sweep.
pub fn lemma4_sweep(radius: f64, n_dirs: usize, eps: &[f64], n_points: usize, seed: u64) -> Result<Vec<Lemma4Row>> {
    let cr = c_r(radius)?;
    let dirs = sample_directions(n_dirs, seed);
    let cases: Vec<(usize, Direction4, f64)> = dirs
        .iter()
        .enumerate()
        .flat_map(|(k, d)| eps.iter().map(move |&e| (k, *d, e)))
        .collect();
    let rows = parallel_map(&cases, |(k, d, e)| -> Result<Lemma4Row> {
        let reduced = lemma4_integral_reduced(d, *e, radius)?;
        let mc = lemma4_integral_mc(d, *e, radius, n_points, seed.wrapping_add(*k as u64))?;
        let bound = 2.0 * cr / e;
        Ok(Lemma4Row {
            e_prime: d.e_prime,
            e1: d.e[0],
            e2: d.e[1],
            e3: d.e[2],
            epsilon: *e,
            radius,
            reduced,
            mc: mc.value,
            mc_std_error: mc.std_error,
            bound,
            margin: bound - reduced,
        })
    });
    rows.into_iter().collect()
}
