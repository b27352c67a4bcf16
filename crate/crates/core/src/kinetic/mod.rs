//! Relativistic kinematics, test fields, the characteristics solver and
//! momentum averaging.

pub mod average;
pub mod bump;
pub mod duhamel;
pub mod field;
pub mod gridio;
pub mod momentum;
pub mod residual;
pub mod support;

pub use average::{grid_layout, materialize_average, materialize_on, Layout, momentum_average, AverageGrid4, GridAxis, GridMeta, GridSpec};
pub use bump::{bump_factor, bump_field, bump_sources, transported_sources, BumpParams, TensorBump, TransportPair, TransportedBump};
pub use duhamel::{duhamel_solve, duhamel_solve_with, DuhamelSolution};
pub use gridio::{read_grid, write_grid};
pub use field::{
    ConstantField, FnField, LinearCombination, PhaseField, ScalarField7, ScaledField, Smoothness, ZeroField,
};
pub use momentum::{characteristic_shift, energy, max_speed, velocity, Momentum};
pub use residual::{damped_transport_residual, transport_derivative, transport_residual, PhasePoint};
pub use support::SupportBox;
