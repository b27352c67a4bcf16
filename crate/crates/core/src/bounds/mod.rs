//! Constants and end-to-end checks of the averaging estimates.

pub mod checks;
pub mod constants;
pub mod report;
pub mod scaling;
pub mod split;

pub use checks::{
    admissible_s, check_lemma2, check_lq_bound, check_theorem1, interpolation_params, lemma2_from_parts,
    lq_bound_on_grid, theorem1_from_parts,
};
pub use constants::{c5, c6, constants, lq_constant, ConstantsRegistry};
pub use report::{BoundReport, Resources};
pub use scaling::{loglog_slope, scaling_experiment, ScalingFrame, ScalingReport};
pub use split::{balanced_alpha, fourier_split_diag, SplitDiagnostic, MAX_SPLIT_AXIS, MAX_SPLIT_MOMENTA};
