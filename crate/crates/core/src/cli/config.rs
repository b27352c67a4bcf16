//! TOML run configuration. Every table and key is optional; omitted values
//! take the defaults documented on each field.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bounds::{admissible_s, ScalingFrame};
use crate::kinetic::GridSpec;
use crate::{Error, Result};

/// Experiments known to the suite, in execution order.
pub const EXPERIMENTS: [&str; 9] = [
    "lemma3",
    "lemma4",
    "transport",
    "lemma2",
    "lq-bounds",
    "theorem1",
    "scaling",
    "fourier-split",
    "norm-equivalence",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// Seeded tensor bumps; experiments that need a compactly supported
    /// solution use the matching transported pairs.
    Bump,
    /// The zero field.
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FamilyConfig {
    pub kind: FamilyKind,
    pub seed: u64,
    /// Sources generated; experiments take the first `count` they need.
    pub count: usize,
}

impl Default for FamilyConfig {
    fn default() -> Self {
        FamilyConfig {
            kind: FamilyKind::Bump,
            seed: 2024,
            count: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BudgetConfig {
    /// Sobol points per shift for phase-space norms.
    pub phase_points: usize,
    /// Sobol pairs per shift for the double-integral seminorm.
    pub pair_points: usize,
    pub shifts: usize,
    pub padding: usize,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        BudgetConfig {
            phase_points: 1 << 16,
            pair_points: 1 << 19,
            shifts: 8,
            padding: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SliceConfig {
    pub directions: usize,
    pub epsilons: Vec<f64>,
    /// Points per direction and ε.
    pub points: usize,
    pub seed: u64,
}

impl Default for SliceConfig {
    fn default() -> Self {
        SliceConfig {
            directions: 200,
            epsilons: vec![0.01, 0.05, 0.1, 0.25, 0.5, 1.0],
            points: 100_000,
            seed: 11,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransportConfig {
    pub sources: usize,
    /// Interior points per source.
    pub points: usize,
    /// Coarsest finite-difference step; three halvings follow.
    pub h0: f64,
}

impl Default for TransportConfig {
    fn default() -> Self {
        TransportConfig {
            sources: 5,
            points: 10,
            h0: 0.02,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LqConfig {
    /// Exponents; `inf` is accepted.
    #[serde(with = "exponents")]
    pub q: Vec<f64>,
    pub sources: usize,
}

/// `f64` lists where `∞` is written as the string `"inf"`, since JSON has no
/// infinite numbers. TOML's native `inf` is read as well.
mod exponents {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Exponent {
        Number(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(q: &[f64], ser: S) -> Result<S::Ok, S::Error> {
        q.iter()
            .map(|&v| if v == f64::INFINITY { Exponent::Text("inf".into()) } else { Exponent::Number(v) })
            .collect::<Vec<_>>()
            .serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<f64>, D::Error> {
        Vec::<Exponent>::deserialize(de)?
            .into_iter()
            .map(|e| match e {
                Exponent::Number(v) => Ok(v),
                Exponent::Text(t) if t == "inf" => Ok(f64::INFINITY),
                Exponent::Text(t) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got \"{t}\""))),
            })
            .collect()
    }
}

impl Default for LqConfig {
    fn default() -> Self {
        LqConfig {
            q: vec![1.0, 2.0, 4.0, f64::INFINITY],
            sources: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Theorem1Config {
    /// `[p, s]` pairs, each with `0 < s < min(1/p, 1 - 1/p)`.
    pub pairs: Vec<[f64; 2]>,
    pub sources: usize,
}

impl Default for Theorem1Config {
    fn default() -> Self {
        Theorem1Config {
            pairs: vec![[2.0, 0.45], [3.0, 0.2], [4.0, 0.2]],
            sources: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScalingConfig {
    pub lambdas: Vec<f64>,
    pub p: f64,
    pub s: f64,
    pub tolerance: f64,
    /// `covariant` (grid scaled with `λ`) or `fixed`.
    pub frame: ScalingFrame,
    /// Grid for the dilated runs; the suite grid when absent.
    pub grid: Option<GridSpec>,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        ScalingConfig {
            lambdas: vec![0.6, 0.8, 1.0, 1.25, 1.6],
            p: 2.0,
            s: 0.5,
            tolerance: 0.05,
            frame: ScalingFrame::Covariant,
            grid: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SplitConfig {
    pub grid: GridSpec,
    pub sources: usize,
    /// Fixed `α`; the balanced value when absent.
    pub alpha: Option<f64>,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            grid: GridSpec::cube(12, 12).with_ball([2, 4, 4]).with_time_rule(16, 128),
            sources: 1,
            alpha: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EquivalenceConfig {
    pub sources: usize,
    /// Largest accepted `(max - min)/mean` of the ratios.
    pub max_spread: f64,
}

impl Default for EquivalenceConfig {
    fn default() -> Self {
        EquivalenceConfig {
            sources: 5,
            max_spread: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Time horizon `T`.
    pub horizon: f64,
    /// Margin `ε₀` of the source time window `[ε₀, T - ε₀]`.
    pub eps0: f64,
    /// Momentum radius `R`.
    pub radius: f64,
    /// Half side of the source x-box `[-a, a]³`.
    pub half_extent: f64,
    pub output: PathBuf,
    /// Seed of every Sobol stream.
    pub seed: u64,
    pub experiments: Vec<String>,
    pub family: FamilyConfig,
    pub grid: GridSpec,
    pub budget: BudgetConfig,
    pub slices: SliceConfig,
    pub transport: TransportConfig,
    pub lq: LqConfig,
    pub theorem1: Theorem1Config,
    pub scaling: ScalingConfig,
    pub split: SplitConfig,
    pub equivalence: EquivalenceConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            horizon: 1.0,
            eps0: 0.1,
            radius: 1.0,
            half_extent: 0.75,
            output: PathBuf::from("ravg-out"),
            seed: 7,
            experiments: EXPERIMENTS.iter().map(|s| s.to_string()).collect(),
            family: FamilyConfig::default(),
            grid: GridSpec::cube(24, 24).with_ball([8, 8, 16]).with_time_rule(12, 64),
            budget: BudgetConfig::default(),
            slices: SliceConfig::default(),
            transport: TransportConfig::default(),
            lq: LqConfig::default(),
            theorem1: Theorem1Config::default(),
            scaling: ScalingConfig::default(),
            split: SplitConfig::default(),
            equivalence: EquivalenceConfig::default(),
        }
    }
}

fn bad(field: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        field: field.to_string(),
        reason: reason.into(),
    }
}

fn positive(field: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(bad(field, "must be positive"));
    }
    Ok(())
}

fn grid_ok(field: &str, g: &GridSpec) -> Result<()> {
    g.validate().map_err(|e| bad(field, e.to_string()))?;
    if g.time_order == 0 || g.ball.contains(&0) {
        return Err(bad(field, "quadrature orders must be positive"));
    }
    Ok(())
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| {
            let field = e.span().map(|s| format!("byte {}..{}", s.start, s.end)).unwrap_or_default();
            bad(&field, e.message().to_string() + &line_hint(text, e.span()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(bad("horizon", "must be positive"));
        }
        if !(self.eps0 > 0.0 && self.eps0 < self.horizon / 2.0) {
            return Err(bad("eps0", "need 0 < eps0 < horizon/2"));
        }
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(bad("radius", "must be positive"));
        }
        if !(self.half_extent > 0.0) || !self.half_extent.is_finite() {
            return Err(bad("half_extent", "must be positive"));
        }
        for e in &self.experiments {
            if !EXPERIMENTS.contains(&e.as_str()) {
                return Err(bad("experiments", format!("unknown experiment `{e}`")));
            }
        }
        positive("family.count", self.family.count)?;
        grid_ok("grid", &self.grid)?;
        let b = &self.budget;
        positive("budget.phase_points", b.phase_points)?;
        positive("budget.pair_points", b.pair_points)?;
        positive("budget.padding", b.padding)?;
        if b.shifts < 2 {
            return Err(bad("budget.shifts", "need at least 2 shifts for error bars"));
        }
        let s = &self.slices;
        positive("slices.directions", s.directions)?;
        if s.points < 10_000 {
            return Err(bad("slices.points", "need at least 10000 points"));
        }
        if s.epsilons.is_empty() || s.epsilons.iter().any(|e| !(*e > 0.0) || !e.is_finite()) {
            return Err(bad("slices.epsilons", "need a nonempty list of positive values"));
        }
        positive("transport.sources", self.transport.sources)?;
        positive("transport.points", self.transport.points)?;
        if !(self.transport.h0 > 0.0) {
            return Err(bad("transport.h0", "must be positive"));
        }
        if self.lq.q.is_empty() || self.lq.q.iter().any(|q| !(*q >= 1.0)) {
            return Err(bad("lq.q", "exponents must lie in [1, inf]"));
        }
        positive("lq.sources", self.lq.sources)?;
        for [p, s] in &self.theorem1.pairs {
            let (lo, hi) = admissible_s(*p).map_err(|_| bad("theorem1.pairs", format!("p = {p} must lie in (1, inf)")))?;
            if !(*s > lo && *s < hi) {
                return Err(bad(
                    "theorem1.pairs",
                    format!("s = {s} violates 0 < s < min(1/p, 1 - 1/p) = {hi} for p = {p}"),
                ));
            }
        }
        positive("theorem1.sources", self.theorem1.sources)?;
        let sc = &self.scaling;
        if sc.lambdas.len() < 2 || sc.lambdas.iter().any(|l| !(0.5..=2.0).contains(l)) {
            return Err(bad("scaling.lambdas", "need at least two values in [0.5, 2]"));
        }
        if !(sc.s > 0.0 && sc.s < 1.0) || !(sc.p >= 1.0) || !sc.p.is_finite() {
            return Err(bad("scaling", "need 0 < s < 1 and finite p >= 1"));
        }
        if !(sc.tolerance > 0.0) {
            return Err(bad("scaling.tolerance", "must be positive"));
        }
        if let Some(g) = &sc.grid {
            grid_ok("scaling.grid", g)?;
        }
        grid_ok("split.grid", &self.split.grid)?;
        positive("split.sources", self.split.sources)?;
        if let Some(a) = self.split.alpha {
            if !(a > 0.0) || !a.is_finite() {
                return Err(bad("split.alpha", "must be positive"));
            }
        }
        if self.equivalence.sources < 2 {
            return Err(bad("equivalence.sources", "need at least 2 fields"));
        }
        if !(self.equivalence.max_spread > 0.0) {
            return Err(bad("equivalence.max_spread", "must be positive"));
        }
        Ok(())
    }

    /// Experiments to run, in the fixed execution order.
    pub fn selected(&self) -> Vec<&'static str> {
        EXPERIMENTS
            .iter()
            .copied()
            .filter(|e| self.experiments.iter().any(|s| s == e))
            .collect()
    }
}

fn line_hint(text: &str, span: Option<std::ops::Range<usize>>) -> String {
    match span {
        Some(s) => {
            let line = text[..s.start.min(text.len())].matches('\n').count() + 1;
            format!(" (line {line})")
        }
        None => String::new(),
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
        field: path.display().to_string(),
        reason: e.to_string(),
    })?;
    RunConfig::parse(&text)
}
