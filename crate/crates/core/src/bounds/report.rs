use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::kinetic::GridSpec;
use crate::norms::DEFAULT_PADDING;
use crate::numerics::SamplerSpec;

/// Outcome of one inequality check `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub mc_error: f64,
    pub pass: bool,
    pub parameters: BTreeMap<String, Value>,
}

impl BoundReport {
    /// `pass ⇔ lhs ≤ rhs + 3·mc_error`.
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, mc_error: f64) -> Self {
        BoundReport {
            name: name.into(),
            lhs,
            rhs,
            margin: rhs - lhs,
            mc_error,
            pass: lhs <= rhs + 3.0 * mc_error,
            parameters: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.parameters.insert(key.to_string(), value.into());
    }

    /// Margin net of the error bar, `rhs + 3·mc_error - lhs`.
    pub fn net_margin(&self) -> f64 {
        self.rhs + 3.0 * self.mc_error - self.lhs
    }
}

/// Resolution and sampling budget shared by the bound checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resources {
    /// Momentum radius `R` of the constants.
    pub radius: f64,
    pub grid: GridSpec,
    /// Sobol points per shift for phase-space norms.
    pub phase_points: usize,
    /// Sobol pairs per shift for the double-integral seminorm.
    pub pair_points: usize,
    pub shifts: usize,
    pub padding: usize,
    pub seed: u64,
}

impl Resources {
    pub fn new(radius: f64, grid: GridSpec) -> Self {
        Resources {
            radius,
            grid,
            phase_points: 1 << 16,
            pair_points: 1 << 19,
            shifts: 8,
            padding: DEFAULT_PADDING,
            seed: 0,
        }
    }

    pub fn phase_sampler(&self) -> SamplerSpec {
        SamplerSpec::sobol(7, self.seed, self.phase_points).with_shifts(self.shifts)
    }

    pub fn pair_sampler(&self) -> SamplerSpec {
        SamplerSpec::sobol(8, self.seed ^ 0x9e37_79b9_7f4a_7c15, self.pair_points).with_shifts(self.shifts)
    }
}
