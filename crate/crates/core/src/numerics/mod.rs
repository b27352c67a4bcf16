//! Shared numerical infrastructure.

pub mod ball;
pub mod quadrature;
pub mod reduce;
pub mod rng;
pub mod sobol;

pub use ball::{ball_points, ball_volume, BallRule};
pub use quadrature::{adaptive_gk15, CompositeGaussLegendre, GaussLegendre, QuadratureRule};
pub use reduce::{parallel_map, parallel_reduce};
pub use rng::{counter_uniform, stream_rng};
pub use sobol::{sobol_stream, SamplerKind, SamplerSpec, SobolStream, MAX_SOBOL_DIMENSION};
