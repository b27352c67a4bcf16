//! `L^q` norm of a sampled average by the trapezoid rule.

use crate::kinetic::AverageGrid4;
use crate::{Error, Result};

/// `(∫|ũ|^q)^{1/q}` with trapezoid weights on every axis; `q = ∞` gives `max|ũ|`.
pub fn lq_norm_avg(grid: &AverageGrid4, q: f64) -> Result<f64> {
    if q.is_infinite() && q > 0.0 {
        return Ok(grid.max_abs());
    }
    if !(q >= 1.0) {
        return Err(Error::invalid("q", format!("need q >= 1, got {q}")));
    }
    let edge = |i: usize, n: usize| if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
    let mut acc = 0.0;
    for (flat, v) in grid.values.iter().enumerate() {
        if *v == 0.0 {
            continue;
        }
        let idx = grid.unravel(flat);
        let w: f64 = (0..4).map(|k| edge(idx[k], grid.dims[k])).product();
        acc += w * if q == 1.0 { v.abs() } else { v.abs().powf(q) };
    }
    Ok((acc * grid.cell_volume()).powf(1.0 / q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_grid_integrates_to_c_times_volume() {
        let g = AverageGrid4::from_fn([5, 6, 7, 8], [0.0; 4], [0.5, 0.2, 0.1, 0.3], 2.0, |_, _| 2.0).unwrap();
        let vol = 2.0 * 1.0 * 0.6 * 2.1;
        assert!((lq_norm_avg(&g, 1.0).unwrap() - 2.0 * vol).abs() < 1e-12);
        assert!((lq_norm_avg(&g, 2.0).unwrap() - 2.0 * vol.sqrt()).abs() < 1e-12);
        assert_eq!(lq_norm_avg(&g, f64::INFINITY).unwrap(), 2.0);
        assert!(lq_norm_avg(&g, 0.9).is_err());
    }

    #[test]
    fn zero_grid_has_zero_norm() {
        let g = AverageGrid4::zeros([3; 4], [0.0; 4], [1.0; 4], 1.0).unwrap();
        assert_eq!(lq_norm_avg(&g, 2.0).unwrap(), 0.0);
    }
}
