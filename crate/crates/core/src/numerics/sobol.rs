//! Randomised Sobol streams with random access.
//!
//! Direction numbers come from the Joe–Kuo "new-joe-kuo-6" table shipped
//! with the `sobol` crate; point generation is done here so that any index can
//! be produced independently (needed for deterministic chunked parallelism).
//! Randomisation is a digital shift (XOR with a seeded 64-bit word per
//! coordinate), one shift per replicate.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sobol::params::JoeKuoD6;
use sobol::Sobol;

use crate::numerics::rng::counter_u64;
use crate::{Error, Result};

pub const MAX_SOBOL_DIMENSION: usize = 16;

const BITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerKind {
    Sobol,
    UniformPrng,
}

/// Parameters of a (randomised) sample stream.
///
/// Identical specs always produce identical streams.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerSpec {
    pub kind: SamplerKind,
    pub dimension: usize,
    pub seed: u64,
    /// Number of independent randomisations used for error bars.
    pub n_shifts: usize,
    /// Points per randomisation.
    pub points: usize,
}

impl SamplerSpec {
    pub fn sobol(dimension: usize, seed: u64, points: usize) -> Self {
        SamplerSpec {
            kind: SamplerKind::Sobol,
            dimension,
            seed,
            n_shifts: 8,
            points,
        }
    }

    pub fn with_shifts(mut self, n_shifts: usize) -> Self {
        self.n_shifts = n_shifts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 || self.dimension > MAX_SOBOL_DIMENSION {
            return Err(Error::invalid(
                "dimension",
                format!("must be in 1..={MAX_SOBOL_DIMENSION}, got {}", self.dimension),
            ));
        }
        if self.n_shifts == 0 {
            return Err(Error::invalid("n_shifts", "must be positive"));
        }
        if self.points == 0 {
            return Err(Error::invalid("points", "must be positive"));
        }
        Ok(())
    }
}

/// A randomised low-discrepancy (or plain pseudo-random) point stream.
#[derive(Debug, Clone)]
pub struct SobolStream {
    spec: SamplerSpec,
    /// `directions[d][k]` is the k-th direction number of coordinate `d`.
    directions: Vec<[u64; BITS]>,
}

/// Build the stream for `spec`; rejects dimensions above 16.
pub fn sobol_stream(spec: SamplerSpec) -> Result<SobolStream> {
    spec.validate()?;
    let directions = direction_table()[..spec.dimension].to_vec();
    Ok(SobolStream { spec, directions })
}

fn direction_table() -> &'static [[u64; BITS]] {
    static TABLE: OnceLock<Vec<[u64; BITS]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        Sobol::<u64>::init_direction_vals::<u32>(MAX_SOBOL_DIMENSION, BITS, &JoeKuoD6::minimal())
            .into_iter()
            .map(|dirs| {
                let mut arr = [0u64; BITS];
                arr.copy_from_slice(&dirs[..BITS]);
                arr
            })
            .collect()
    })
}

impl SobolStream {
    pub fn spec(&self) -> &SamplerSpec {
        &self.spec
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension
    }

    /// Raw (unshifted) Sobol bits of point `index`, coordinate `dim`.
    #[inline]
    fn raw_bits(&self, index: u64, dim: usize) -> u64 {
        let gray = index ^ (index >> 1);
        let dirs = &self.directions[dim];
        let mut acc = 0u64;
        let mut g = gray;
        let mut k = 0;
        while g != 0 {
            if g & 1 == 1 {
                acc ^= dirs[k];
            }
            g >>= 1;
            k += 1;
        }
        acc
    }

    /// Write point `index` of replicate `shift` into `out` (length = dimension).
    ///
    /// `shift = None` gives the unshifted sequence, whose first point is the
    /// origin corner `(0, …, 0)`.
    pub fn fill(&self, shift: Option<usize>, index: u64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.spec.dimension);
        match self.spec.kind {
            SamplerKind::Sobol => {
                for (d, o) in out.iter_mut().enumerate() {
                    let mut bits = self.raw_bits(index, d);
                    if let Some(s) = shift {
                        bits ^= counter_u64(self.spec.seed, s as u64, d as u64);
                    }
                    *o = to_unit(bits);
                }
            }
            SamplerKind::UniformPrng => {
                let stream = shift.map_or(u64::MAX, |s| s as u64);
                let dim = self.spec.dimension as u64;
                for (d, o) in out.iter_mut().enumerate() {
                    let bits = counter_u64(self.spec.seed, stream, index * dim + d as u64);
                    *o = to_unit(bits);
                }
            }
        }
    }

    /// Convenience: point `index` of replicate `shift` as a fresh vector.
    pub fn point(&self, shift: Option<usize>, index: u64) -> Vec<f64> {
        let mut v = vec![0.0; self.spec.dimension];
        self.fill(shift, index, &mut v);
        v
    }
}

#[inline]
fn to_unit(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_unshifted_point_is_origin() {
        let s = sobol_stream(SamplerSpec::sobol(5, 1, 16)).unwrap();
        assert_eq!(s.point(None, 0), vec![0.0; 5]);
        assert_eq!(s.point(None, 1), vec![0.5; 5]);
    }

    #[test]
    fn matches_reference_iterator() {
        let s = sobol_stream(SamplerSpec::sobol(8, 1, 16)).unwrap();
        let reference = Sobol::<f64>::new(8, &JoeKuoD6::minimal());
        for (i, pt) in reference.take(300).enumerate() {
            let ours = s.point(None, i as u64);
            for d in 0..8 {
                assert!((ours[d] - pt[d]).abs() < 1e-15, "i={i} d={d}");
            }
        }
    }

    #[test]
    fn rejects_dimension_above_sixteen() {
        assert!(sobol_stream(SamplerSpec::sobol(17, 1, 16)).is_err());
        assert!(sobol_stream(SamplerSpec::sobol(16, 1, 16)).is_ok());
    }

    #[test]
    fn axis_means_are_equidistributed() {
        let s = sobol_stream(SamplerSpec::sobol(16, 3, 1 << 16)).unwrap();
        let n = 1u64 << 16;
        let mut sums = [0.0; 16];
        let mut buf = [0.0; 16];
        for i in 0..n {
            s.fill(Some(0), i, &mut buf);
            for (s, b) in sums.iter_mut().zip(&buf) {
                *s += b;
            }
        }
        for (d, s) in sums.iter().enumerate() {
            assert!((s / n as f64 - 0.5).abs() < 0.01, "axis {d}");
        }
    }

    #[test]
    fn equal_specs_give_identical_streams() {
        let a = sobol_stream(SamplerSpec::sobol(7, 11, 64)).unwrap();
        let b = sobol_stream(SamplerSpec::sobol(7, 11, 64)).unwrap();
        for i in 0..64 {
            assert_eq!(a.point(Some(3), i), b.point(Some(3), i));
        }
        let c = sobol_stream(SamplerSpec::sobol(7, 12, 64)).unwrap();
        assert_ne!(a.point(Some(3), 5), c.point(Some(3), 5));
    }

    #[test]
    fn prng_kind_is_deterministic() {
        let mut spec = SamplerSpec::sobol(3, 4, 10);
        spec.kind = SamplerKind::UniformPrng;
        let a = sobol_stream(spec).unwrap();
        assert_eq!(a.point(Some(1), 9), a.point(Some(1), 9));
        assert_ne!(a.point(Some(1), 9), a.point(Some(2), 9));
    }
}
