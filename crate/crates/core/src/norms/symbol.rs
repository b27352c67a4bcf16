//! Physical-side check of `‖∂ₜu + (p/p₀)·∇ₓu‖₂ = ‖f‖₂`.

use serde::{Deserialize, Serialize};

use crate::kinetic::{transport_derivative, PhaseField, PhasePoint};
use crate::norms::{mean_and_se, root_with_error};
use crate::numerics::{parallel_map, sobol_stream, SamplerSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolCheck {
    /// `‖f‖₂`.
    pub f_norm: f64,
    pub f_std_error: f64,
    /// `‖∂ₜu + (p/p₀)·∇ₓu‖₂` with centered differences of step `h_fd`.
    pub transport_norm: f64,
    pub transport_std_error: f64,
    pub h_fd: f64,
    pub n_samples: usize,
}

impl SymbolCheck {
    pub fn gap(&self) -> f64 {
        (self.f_norm - self.transport_norm).abs()
    }
}

/// Both norms on the same randomized Sobol points over the support of `u`.
pub fn symbol_weighted_l2(f: &dyn PhaseField, u: &dyn PhaseField, sampler: &SamplerSpec, h_fd: f64) -> Result<SymbolCheck> {
    sampler.validate()?;
    if sampler.dimension != 7 {
        return Err(Error::invalid("sampler", "phase-space sampler must have dimension 7"));
    }
    if !(h_fd > 0.0) {
        return Err(Error::invalid("h_fd", "finite-difference step must be positive"));
    }
    let sup = *u.support();
    let vol = sup.t_len() * sup.x_volume() * (2.0 * sup.p_radius).powi(3);
    let stream = sobol_stream(*sampler)?;
    let shifts: Vec<usize> = (0..sampler.n_shifts).collect();
    let reps = parallel_map(&shifts, |&k| -> Result<(f64, f64)> {
        let mut z = [0.0; 7];
        let (mut af, mut au) = (0.0, 0.0);
        for i in 0..sampler.points as u64 {
            stream.fill(Some(k), i, &mut z);
            let t = sup.t_range.0 + z[0] * sup.t_len();
            let x = std::array::from_fn(|j| sup.x_lo[j] + z[1 + j] * (sup.x_hi[j] - sup.x_lo[j]));
            let p: [f64; 3] = std::array::from_fn(|j| sup.p_radius * (2.0 * z[4 + j] - 1.0));
            if p[0] * p[0] + p[1] * p[1] + p[2] * p[2] > sup.p_radius * sup.p_radius {
                continue;
            }
            let fv = f.eval(t, &x, &p);
            af += fv * fv;
            let d = transport_derivative(u, &PhasePoint::new(t, x, p), h_fd)?;
            au += d * d;
        }
        let n = sampler.points as f64;
        Ok((vol * af / n, vol * au / n))
    });
    let reps: Vec<(f64, f64)> = reps.into_iter().collect::<Result<_>>()?;
    let (fi, fse) = mean_and_se(&reps.iter().map(|r| r.0).collect::<Vec<_>>());
    let (ui, use_) = mean_and_se(&reps.iter().map(|r| r.1).collect::<Vec<_>>());
    let (f_norm, f_std_error) = root_with_error(fi, fse, 2.0);
    let (transport_norm, transport_std_error) = root_with_error(ui, use_, 2.0);
    Ok(SymbolCheck {
        f_norm,
        f_std_error,
        transport_norm,
        transport_std_error,
        h_fd,
        n_samples: sampler.points * sampler.n_shifts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinetic::{SupportBox, ZeroField};

    #[test]
    fn zero_fields_give_zero() {
        let z = ZeroField::new(SupportBox::cube_domain(1.0, 0.1, 0.5, 1.0).unwrap());
        let c = symbol_weighted_l2(&z, &z, &SamplerSpec::sobol(7, 1, 128), 1e-3).unwrap();
        assert_eq!((c.f_norm, c.transport_norm), (0.0, 0.0));
    }
}
