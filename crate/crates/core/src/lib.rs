//! Numerical toolkit for the relativistic free-transport equation
//! `∂u/∂t + (p/p₀)·∇ₓu = f` and the regularity of its momentum average
//! `ũ(t, x) = ∫ u(t, x, p) dp`.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: Sobol streams, counter-keyed RNG, quadrature rules and a
//!   reproducible parallel reduction.
//! * [`kinetic`]: relativistic kinematics, compactly supported test fields,
//!   the characteristics (Duhamel) solver and momentum averaging.
//! * [`norms`]: phase-space `Lᵖ` norms, grid `L^q` norms, the 4-D FFT with
//!   the Fourier-multiplier `Hˢ` norm and the Monte-Carlo double-integral
//!   seminorm.
//! * [`geometry`]: the slab measure and weighted integral estimates over the
//!   momentum ball together with the constant `C_R`.
//! * [`bounds`]: the constants registry and every end-to-end inequality check.
//! * [`cli`]: configuration, suite orchestration and report emission.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod kinetic;
pub mod norms;
pub mod numerics;

pub use error::{Error, Result};

pub type Vec3 = [f64; 3];
