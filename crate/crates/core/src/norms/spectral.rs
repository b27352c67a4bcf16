//! 4-D Fourier transform of a sampled average and the multiplier `Hˢ` norm.
//!
//! Convention: `û(τ, z) = (2π)^{-2} ∫ ũ(t, x) e^{-iτt - ix·z} dt dx`, which is
//! unitary on `L²(R⁴)`. The discrete transform is a zero-padded FFT scaled by
//! `Δt·Δx₁Δx₂Δx₃·(2π)^{-2}` with the phase of the grid origin restored, on the
//! frequency lattice `2πk/(NΔ)`. With this scaling
//! `Σ|û|²·ΔτΔz³ = ΔtΔx³·Σ|ũ|²` holds exactly.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::kinetic::AverageGrid4;
use crate::{Error, Result};

/// Zero-padding factor per axis used by [`fft4`].
pub const DEFAULT_PADDING: usize = 2;

/// Relative size of boundary values tolerated before a transform is refused.
pub const BOUNDARY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct SpectralGrid4 {
    /// Row-major `(τ, z₁, z₂, z₃)` coefficients, FFT index order.
    pub coeffs: Vec<Complex64>,
    /// Padded node counts.
    pub dims: [usize; 4],
    /// Node counts of the source grid.
    pub source_dims: [usize; 4],
    /// Physical spacings `Δt, Δx₁, Δx₂, Δx₃`.
    pub spacing: [f64; 4],
    /// Physical origin of the source grid.
    pub origin: [f64; 4],
    pub horizon: f64,
}

impl SpectralGrid4 {
    /// Frequency spacing `2π/(NΔ)` of axis `k`.
    pub fn freq_spacing(&self, k: usize) -> f64 {
        2.0 * PI / (self.dims[k] as f64 * self.spacing[k])
    }

    /// Signed frequency of FFT index `m` on axis `k`.
    #[inline]
    pub fn frequency(&self, k: usize, m: usize) -> f64 {
        let n = self.dims[k];
        let signed = if m < n.div_ceil(2) { m as f64 } else { m as f64 - n as f64 };
        signed * self.freq_spacing(k)
    }

    /// `ΔτΔz₁Δz₂Δz₃`.
    pub fn cell_volume(&self) -> f64 {
        (0..4).map(|k| self.freq_spacing(k)).product()
    }

    pub fn unravel(&self, mut flat: usize) -> [usize; 4] {
        let mut out = [0; 4];
        for k in (0..4).rev() {
            out[k] = flat % self.dims[k];
            flat /= self.dims[k];
        }
        out
    }

    /// `(τ, z)` of flat index `flat`.
    pub fn frequencies(&self, flat: usize) -> (f64, [f64; 3]) {
        let i = self.unravel(flat);
        (
            self.frequency(0, i[0]),
            [self.frequency(1, i[1]), self.frequency(2, i[2]), self.frequency(3, i[3])],
        )
    }

    /// `Σ|û|²·ΔτΔz³`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.cell_volume()
    }

    /// `Σ w(τ, z)|û|²·ΔτΔz³` for a weight of the frequencies.
    pub fn weighted_norm_sq<W: Fn(f64, &[f64; 3]) -> f64>(&self, w: W) -> f64 {
        let mut acc = 0.0;
        for (flat, c) in self.coeffs.iter().enumerate() {
            let n2 = c.norm_sqr();
            if n2 == 0.0 {
                continue;
            }
            let (tau, z) = self.frequencies(flat);
            acc += w(tau, &z) * n2;
        }
        acc * self.cell_volume()
    }
}

fn transform_axis(data: &mut [Complex64], dims: &[usize; 4], axis: usize, planner: &mut FftPlanner<f64>, inverse: bool) {
    let n = dims[axis];
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    let stride: usize = dims[axis + 1..].iter().product();
    if stride == 1 {
        for line in data.chunks_exact_mut(n) {
            fft.process(line);
        }
        return;
    }
    let block = n * stride;
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for chunk in data.chunks_exact_mut(block) {
        for off in 0..stride {
            for (j, l) in line.iter_mut().enumerate() {
                *l = chunk[off + j * stride];
            }
            fft.process(&mut line);
            for (j, l) in line.iter().enumerate() {
                chunk[off + j * stride] = *l;
            }
        }
    }
}

fn transform(data: &mut [Complex64], dims: &[usize; 4], inverse: bool) {
    let mut planner = FftPlanner::new();
    for axis in 0..4 {
        transform_axis(data, dims, axis, &mut planner, inverse);
    }
}

/// [`fft4_padded`] with the default padding factor 2.
pub fn fft4(grid: &AverageGrid4) -> Result<SpectralGrid4> {
    fft4_padded(grid, DEFAULT_PADDING)
}

/// Scaled FFT of `grid` zero-padded to `pad × dims`. Refuses grids whose face
/// values exceed `1e-8 · max|ũ|` (wrap-around would corrupt the transform).
pub fn fft4_padded(grid: &AverageGrid4, pad: usize) -> Result<SpectralGrid4> {
    if pad == 0 {
        return Err(Error::invalid("pad", "padding factor must be at least 1"));
    }
    grid.check_vanishing_boundary(BOUNDARY_TOLERANCE)?;
    fft4_unchecked(grid, pad)
}

/// [`fft4_padded`] without the boundary test, for callers that check the
/// faces against a wider reference.
pub fn fft4_unchecked(grid: &AverageGrid4, pad: usize) -> Result<SpectralGrid4> {
    if pad == 0 {
        return Err(Error::invalid("pad", "padding factor must be at least 1"));
    }
    let dims: [usize; 4] = std::array::from_fn(|k| grid.dims[k] * pad);
    let total: usize = dims.iter().product();
    let mut data = vec![Complex64::new(0.0, 0.0); total];
    let src = grid.dims;
    for (flat, v) in grid.values.iter().enumerate() {
        if *v == 0.0 {
            continue;
        }
        let i = grid.unravel(flat);
        let j = ((i[0] * dims[1] + i[1]) * dims[2] + i[2]) * dims[3] + i[3];
        data[j] = Complex64::new(*v, 0.0);
    }
    transform(&mut data, &dims, false);
    let mut spec = SpectralGrid4 {
        coeffs: data,
        dims,
        source_dims: src,
        spacing: grid.spacing,
        origin: grid.origin,
        horizon: grid.horizon,
    };
    let scale = grid.cell_volume() / (4.0 * PI * PI);
    for flat in 0..total {
        let (tau, z) = spec.frequencies(flat);
        let phase = -(tau * grid.origin[0] + z[0] * grid.origin[1] + z[1] * grid.origin[2] + z[2] * grid.origin[3]);
        spec.coeffs[flat] *= Complex64::from_polar(scale, phase);
    }
    Ok(spec)
}

/// Inverse of [`fft4_padded`], cropped back to the source grid.
pub fn ifft4(spec: &SpectralGrid4) -> Result<AverageGrid4> {
    let total: usize = spec.dims.iter().product();
    let cell: f64 = spec.spacing.iter().product();
    let scale = 4.0 * PI * PI / (cell * total as f64);
    let mut data = spec.coeffs.clone();
    for (flat, c) in data.iter_mut().enumerate() {
        let (tau, z) = spec.frequencies(flat);
        let phase = tau * spec.origin[0] + z[0] * spec.origin[1] + z[1] * spec.origin[2] + z[2] * spec.origin[3];
        *c *= Complex64::from_polar(scale, phase);
    }
    transform(&mut data, &spec.dims, true);
    let d = spec.dims;
    let mut out = AverageGrid4::zeros(spec.source_dims, spec.origin, spec.spacing, spec.horizon)?;
    for flat in 0..out.len() {
        let i = out.unravel(flat);
        out.values[flat] = data[((i[0] * d[1] + i[1]) * d[2] + i[2]) * d[3] + i[3]].re;
    }
    Ok(out)
}

/// `(Σ (τ² + |z|²)^s |û|² ΔτΔz³)^{1/2}`.
pub fn hs_norm_fourier(spec: &SpectralGrid4, s: f64) -> f64 {
    spec.weighted_norm_sq(|tau, z| (tau * tau + z[0] * z[0] + z[1] * z[1] + z[2] * z[2]).powf(s))
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(n: usize, sigma: f64) -> AverageGrid4 {
        let l = 8.0 * sigma;
        let h = 2.0 * l / (n - 1) as f64;
        AverageGrid4::from_fn([n; 4], [-l; 4], [h; 4], 2.0 * l, |t, x| {
            (-(t * t + x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (2.0 * sigma * sigma)).exp()
        })
        .unwrap()
    }

    #[test]
    fn parseval_and_round_trip() {
        let g = gaussian(12, 0.5);
        let spec = fft4(&g).unwrap();
        let phys = g.values.iter().map(|v| v * v).sum::<f64>() * g.cell_volume();
        assert!((spec.l2_norm_sq() / phys - 1.0).abs() < 1e-10);
        let back = ifft4(&spec).unwrap();
        let err = back.values.iter().zip(&g.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn zero_grid_has_zero_spectrum() {
        let g = AverageGrid4::zeros([8; 4], [0.0; 4], [0.1; 4], 1.0).unwrap();
        let spec = fft4(&g).unwrap();
        assert!(spec.coeffs.iter().all(|c| c.norm() == 0.0));
        assert_eq!(hs_norm_fourier(&spec, 0.5), 0.0);
    }

    #[test]
    fn rejects_nonvanishing_boundary() {
        let g = AverageGrid4::from_fn([8; 4], [0.0; 4], [0.1; 4], 1.0, |_, _| 1.0).unwrap();
        assert!(matches!(fft4(&g), Err(Error::BoundaryNotVanishing { .. })));
    }

    #[test]
    fn frequency_lattice_is_signed() {
        let g = gaussian(8, 0.5);
        let spec = fft4_padded(&g, 1).unwrap();
        assert_eq!(spec.frequency(0, 0), 0.0);
        assert!(spec.frequency(0, 7) < 0.0);
        assert!((spec.frequency(0, 1) - 2.0 * PI / (8.0 * g.spacing[0])).abs() < 1e-15);
    }
}
