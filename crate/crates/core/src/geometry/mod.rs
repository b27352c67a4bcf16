//! The slab set `E_R = {p ∈ B_R : |p·e/p₀ + e'| ≤ ε}`: its measure, the
//! weighted integral over its complement and the constant `C_R`.

pub mod direction;
pub mod slice;
pub mod sweep;

pub use direction::{random_rotation, sample_direction4, sample_directions, Direction4};
pub use slice::{
    c_r, ep4_threshold, ep4_threshold_sharp, lemma4_integral_mc, lemma4_integral_reduced, measure_slice_mc,
    measure_slice_quadrature, measure_slice_sweep, McEstimate, SliceSet,
};
pub use sweep::{lemma3_sweep, lemma4_sweep, Lemma3Row, Lemma4Row};
