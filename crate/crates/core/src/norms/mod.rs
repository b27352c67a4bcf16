//! Norms of phase-space fields and of the momentum average.

pub mod gagliardo;
pub mod lq;
pub mod phase;
pub mod spectral;
pub mod symbol;

pub use gagliardo::{admissible, gagliardo_mc, interpolate, seminorm_mc, SeminormEstimate, Variant};
pub use lq::lq_norm_avg;
pub use phase::{lp_norm_phase, sup_norm_phase, NormEstimate};
pub use spectral::{fft4, fft4_padded, fft4_unchecked, hs_norm_fourier, ifft4, SpectralGrid4, BOUNDARY_TOLERANCE, DEFAULT_PADDING};
pub use symbol::{symbol_weighted_l2, SymbolCheck};

/// Mean and standard error of the mean of independent replicates.
pub(crate) fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// `I^{1/p}` with a delta-method error bar from the error of `I`.
pub(crate) fn root_with_error(integral: f64, se: f64, p: f64) -> (f64, f64) {
    let value = integral.max(0.0).powf(1.0 / p);
    if integral <= 0.0 {
        return (value, se.max(0.0).powf(1.0 / p));
    }
    (value, value * se / (p * integral))
}
