//! Phase-space fields `g(t, x, p)` with declared compact support.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::kinetic::support::SupportBox;
use crate::{Error, Result, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Smoothness {
    /// At least C³; finite-difference residuals are meaningful.
    Smooth,
    /// Only bounded; derivative-based checks are skipped.
    Bounded,
}

/// A function of `(t, x, p)` that vanishes outside [`PhaseField::support`].
///
/// Implementations are pure and may be evaluated from many threads at once.
pub trait PhaseField: Send + Sync {
    fn eval(&self, t: f64, x: &Vec3, p: &Vec3) -> f64;
    fn support(&self) -> &SupportBox;
    fn smoothness(&self) -> Smoothness;
    fn label(&self) -> String {
        "field".to_string()
    }
    /// Cheap exclusion test: `true` only if `g(·, ·, p) ≡ 0`.
    fn vanishes_at_momentum(&self, _p: &Vec3) -> bool {
        false
    }
}

/// Shared handle to a phase-space field.
pub type ScalarField7 = Arc<dyn PhaseField>;

impl fmt::Debug for dyn PhaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

#[derive(Debug, Clone)]
pub struct ZeroField {
    support: SupportBox,
}

impl ZeroField {
    pub fn new(support: SupportBox) -> Self {
        ZeroField { support }
    }

    pub fn shared(support: SupportBox) -> ScalarField7 {
        Arc::new(Self::new(support))
    }
}

impl PhaseField for ZeroField {
    fn eval(&self, _t: f64, _x: &Vec3, _p: &Vec3) -> f64 {
        0.0
    }
    fn support(&self) -> &SupportBox {
        &self.support
    }
    fn smoothness(&self) -> Smoothness {
        Smoothness::Smooth
    }
    fn label(&self) -> String {
        "zero".into()
    }
    fn vanishes_at_momentum(&self, _p: &Vec3) -> bool {
        true
    }
}

/// `c` on its support box, 0 elsewhere.
#[derive(Debug, Clone)]
pub struct ConstantField {
    value: f64,
    support: SupportBox,
}

impl ConstantField {
    pub fn new(value: f64, support: SupportBox) -> Self {
        ConstantField { value, support }
    }
}

impl PhaseField for ConstantField {
    fn eval(&self, t: f64, x: &Vec3, p: &Vec3) -> f64 {
        if self.support.contains(t, x, p) {
            self.value
        } else {
            0.0
        }
    }
    fn support(&self) -> &SupportBox {
        &self.support
    }
    fn smoothness(&self) -> Smoothness {
        Smoothness::Bounded
    }
    fn label(&self) -> String {
        format!("constant({})", self.value)
    }
}

/// Wraps a closure; the caller guarantees it vanishes outside `support`.
pub struct FnField<F> {
    f: F,
    support: SupportBox,
    smoothness: Smoothness,
}

impl<F> FnField<F>
where
    F: Fn(f64, &Vec3, &Vec3) -> f64 + Send + Sync,
{
    pub fn new(f: F, support: SupportBox, smoothness: Smoothness) -> Self {
        FnField { f, support, smoothness }
    }
}

impl<F> PhaseField for FnField<F>
where
    F: Fn(f64, &Vec3, &Vec3) -> f64 + Send + Sync,
{
    fn eval(&self, t: f64, x: &Vec3, p: &Vec3) -> f64 {
        if self.support.contains(t, x, p) {
            (self.f)(t, x, p)
        } else {
            0.0
        }
    }
    fn support(&self) -> &SupportBox {
        &self.support
    }
    fn smoothness(&self) -> Smoothness {
        self.smoothness
    }
    fn label(&self) -> String {
        "fn".into()
    }
}

/// `Σ cᵢ gᵢ`, supported on the union of the supports.
pub struct LinearCombination {
    terms: Vec<(f64, ScalarField7)>,
    support: SupportBox,
    smoothness: Smoothness,
}

impl LinearCombination {
    pub fn new(terms: Vec<(f64, ScalarField7)>) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::invalid("terms", "linear combination needs at least one term"))?;
        let mut support = *first.1.support();
        let mut smoothness = Smoothness::Smooth;
        for (_, g) in &terms {
            support = support.union(g.support());
            if g.smoothness() == Smoothness::Bounded {
                smoothness = Smoothness::Bounded;
            }
        }
        Ok(LinearCombination {
            terms,
            support,
            smoothness,
        })
    }

    pub fn shared(terms: Vec<(f64, ScalarField7)>) -> Result<ScalarField7> {
        Ok(Arc::new(Self::new(terms)?))
    }
}

impl PhaseField for LinearCombination {
    fn eval(&self, t: f64, x: &Vec3, p: &Vec3) -> f64 {
        self.terms.iter().map(|(c, g)| c * g.eval(t, x, p)).sum()
    }
    fn support(&self) -> &SupportBox {
        &self.support
    }
    fn smoothness(&self) -> Smoothness {
        self.smoothness
    }
    fn vanishes_at_momentum(&self, p: &Vec3) -> bool {
        self.terms.iter().all(|(_, g)| g.vanishes_at_momentum(p))
    }
    fn label(&self) -> String {
        let parts: Vec<String> = self.terms.iter().map(|(c, g)| format!("{c}*{}", g.label())).collect();
        parts.join(" + ")
    }
}

/// `g_λ(t, x, p) = c · g(λt, λx, p)`, the parabolic-free rescaling used by the
/// scaling law. With `c = λ` a source `f` maps to the source of `u(λt, λx, p)`.
pub struct ScaledField {
    inner: ScalarField7,
    lambda: f64,
    prefactor: f64,
    support: SupportBox,
}

impl ScaledField {
    pub fn new(inner: ScalarField7, lambda: f64, prefactor: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::invalid("lambda", "must be positive"));
        }
        let s = inner.support();
        let t_range = (s.t_range.0 / lambda, s.t_range.1 / lambda);
        let mut x_lo = s.x_lo;
        let mut x_hi = s.x_hi;
        for k in 0..3 {
            x_lo[k] /= lambda;
            x_hi[k] /= lambda;
        }
        let support = SupportBox::new(s.horizon, t_range, x_lo, x_hi, s.p_radius).map_err(|_| {
            Error::invalid(
                "lambda",
                format!("scaled time window [{}, {}] leaves [0, T]", t_range.0, t_range.1),
            )
        })?;
        Ok(ScaledField {
            inner,
            lambda,
            prefactor,
            support,
        })
    }

    /// Source scaling `f_λ = λ·f(λt, λx, p)`.
    pub fn source(inner: ScalarField7, lambda: f64) -> Result<ScalarField7> {
        Ok(Arc::new(Self::new(inner, lambda, lambda)?))
    }
}

impl PhaseField for ScaledField {
    fn eval(&self, t: f64, x: &Vec3, p: &Vec3) -> f64 {
        let l = self.lambda;
        self.prefactor * self.inner.eval(l * t, &[l * x[0], l * x[1], l * x[2]], p)
    }
    fn support(&self) -> &SupportBox {
        &self.support
    }
    fn smoothness(&self) -> Smoothness {
        self.inner.smoothness()
    }
    fn label(&self) -> String {
        format!("scaled[{}]({})", self.lambda, self.inner.label())
    }
    fn vanishes_at_momentum(&self, p: &Vec3) -> bool {
        self.inner.vanishes_at_momentum(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn domain() -> SupportBox {
        SupportBox::cube_domain(1.0, 0.1, 0.5, 1.0).unwrap()
    }

    #[test]
    fn constant_field_vanishes_outside() {
        let c = ConstantField::new(2.0, domain());
        assert_eq!(c.eval(0.5, &[0.0; 3], &[0.0; 3]), 2.0);
        assert_eq!(c.eval(0.05, &[0.0; 3], &[0.0; 3]), 0.0);
        assert_eq!(c.eval(0.5, &[0.6, 0.0, 0.0], &[0.0; 3]), 0.0);
        assert_eq!(c.eval(0.5, &[0.0; 3], &[1.1, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn linear_combination_sums() {
        let a: ScalarField7 = Arc::new(ConstantField::new(2.0, domain()));
        let b: ScalarField7 = Arc::new(ConstantField::new(3.0, domain()));
        let lc = LinearCombination::new(vec![(1.5, a), (-1.0, b)]).unwrap();
        assert_eq!(lc.eval(0.5, &[0.0; 3], &[0.0; 3]), 0.0);
        assert!(LinearCombination::new(vec![]).is_err());
    }

    #[test]
    fn scaled_field_rejects_escape_from_horizon() {
        let a: ScalarField7 = Arc::new(ConstantField::new(1.0, domain()));
        assert!(ScaledField::new(a.clone(), 0.5, 1.0).is_err());
        let s = ScaledField::new(a, 2.0, 2.0).unwrap();
        assert_eq!(s.support().t_range, (0.05, 0.45));
        assert_eq!(s.eval(0.25, &[0.0; 3], &[0.0; 3]), 2.0);
    }
}
