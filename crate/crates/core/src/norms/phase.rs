//! `Lᵖ` norms over the 7-D phase space by randomized quasi-Monte Carlo.

use serde::{Deserialize, Serialize};

use crate::kinetic::PhaseField;
use crate::norms::{mean_and_se, root_with_error};
use crate::numerics::{parallel_map, sobol_stream, SamplerSpec};
use crate::{Error, Result, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: usize,
}

/// Maps a point of `[0,1)^7` to `(t, x, p)` in the support box, `p` in the
/// cube around `B_R`.
fn phase_point(g: &dyn PhaseField, u: &[f64]) -> (f64, Vec3, Vec3) {
    let s = g.support();
    let t = s.t_range.0 + u[0] * s.t_len();
    let x = std::array::from_fn(|k| s.x_lo[k] + u[1 + k] * (s.x_hi[k] - s.x_lo[k]));
    let p = std::array::from_fn(|k| s.p_radius * (2.0 * u[4 + k] - 1.0));
    (t, x, p)
}

fn phase_box_volume(g: &dyn PhaseField) -> f64 {
    let s = g.support();
    s.t_len() * s.x_volume() * (2.0 * s.p_radius).powi(3)
}

fn check_sampler(sampler: &SamplerSpec) -> Result<()> {
    sampler.validate()?;
    if sampler.dimension != 7 {
        return Err(Error::invalid("sampler", "phase-space sampler must have dimension 7"));
    }
    Ok(())
}

/// `(∫|g|^p)^{1/p}` over the support of `g`. `sampler.points` points per
/// shift, error bar from the spread of the `n_shifts` shifted replicates.
/// `p_exp = ∞` is served by [`sup_norm_phase`].
pub fn lp_norm_phase(g: &dyn PhaseField, p_exp: f64, sampler: &SamplerSpec) -> Result<NormEstimate> {
    if p_exp.is_infinite() && p_exp > 0.0 {
        return sup_norm_phase(g, sampler);
    }
    if !(p_exp >= 1.0) {
        return Err(Error::invalid("p_exp", format!("need p >= 1, got {p_exp}")));
    }
    check_sampler(sampler)?;
    let stream = sobol_stream(*sampler)?;
    let vol = phase_box_volume(g);
    let shifts: Vec<usize> = (0..sampler.n_shifts).collect();
    let replicates = parallel_map(&shifts, |&k| {
        let mut u = [0.0; 7];
        let mut acc = 0.0;
        for i in 0..sampler.points as u64 {
            stream.fill(Some(k), i, &mut u);
            let (t, x, p) = phase_point(g, &u);
            let v = g.eval(t, &x, &p).abs();
            if v != 0.0 {
                acc += if p_exp == 1.0 { v } else { v.powf(p_exp) };
            }
        }
        vol * acc / sampler.points as f64
    });
    let (integral, se) = mean_and_se(&replicates);
    let (value, std_error) = root_with_error(integral, se, p_exp);
    Ok(NormEstimate {
        value,
        std_error,
        n_samples: sampler.points * sampler.n_shifts,
    })
}

/// Largest `|g|` over the same node set; no error bar.
pub fn sup_norm_phase(g: &dyn PhaseField, sampler: &SamplerSpec) -> Result<NormEstimate> {
    check_sampler(sampler)?;
    let stream = sobol_stream(*sampler)?;
    let shifts: Vec<usize> = (0..sampler.n_shifts).collect();
    let maxima = parallel_map(&shifts, |&k| {
        let mut u = [0.0; 7];
        let mut m: f64 = 0.0;
        for i in 0..sampler.points as u64 {
            stream.fill(Some(k), i, &mut u);
            let (t, x, p) = phase_point(g, &u);
            m = m.max(g.eval(t, &x, &p).abs());
        }
        m
    });
    Ok(NormEstimate {
        value: maxima.into_iter().fold(0.0, f64::max),
        std_error: 0.0,
        n_samples: sampler.points * sampler.n_shifts,
    })
}
