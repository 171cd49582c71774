//! Sums of signed power laws, `V(r) = Σ sgn(λ)·α·r^λ`.

use serde::{Deserialize, Serialize};

use crate::error::{AfmError, Result};

/// One term `sgn(λ)·α·r^λ`. The sign convention makes every term attractive
/// (negative powers) or confining (positive powers) when `α ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerTerm {
    pub alpha: f64,
    pub lambda: f64,
}

impl PowerTerm {
    pub fn value(&self, r: f64) -> f64 {
        self.lambda.signum() * self.alpha * r.powf(self.lambda)
    }

    /// `|λ|·α·r^(λ−1)`, always non-negative.
    pub fn derivative(&self, r: f64) -> f64 {
        self.lambda.abs() * self.alpha * r.powf(self.lambda - 1.0)
    }

    fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || self.alpha < 0.0 {
            return Err(AfmError::InvalidPotential(format!(
                "coupling must be finite and non-negative, got {}",
                self.alpha
            )));
        }
        if !self.lambda.is_finite() || self.lambda <= -2.0 || self.lambda == 0.0 {
            return Err(AfmError::InvalidPotential(format!(
                "exponent must satisfy λ > -2 and λ != 0, got {}",
                self.lambda
            )));
        }
        Ok(())
    }
}

/// Radial potential built from a finite list of [`PowerTerm`]s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<PowerTerm>", into = "Vec<PowerTerm>")]
pub struct PowerLawPotential {
    terms: Vec<PowerTerm>,
}

impl PowerLawPotential {
    pub fn new(terms: Vec<PowerTerm>) -> Result<Self> {
        for t in &terms {
            t.validate()?;
        }
        Ok(Self { terms })
    }

    /// `−a/r`
    pub fn coulomb(a: f64) -> Result<Self> {
        Self::new(vec![PowerTerm { alpha: a, lambda: -1.0 }])
    }

    /// `b·r`
    pub fn linear(b: f64) -> Result<Self> {
        Self::new(vec![PowerTerm { alpha: b, lambda: 1.0 }])
    }

    /// `−a/r + b·r`
    pub fn funnel(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![
            PowerTerm { alpha: a, lambda: -1.0 },
            PowerTerm { alpha: b, lambda: 1.0 },
        ])
    }

    pub fn single(alpha: f64, lambda: f64) -> Result<Self> {
        Self::new(vec![PowerTerm { alpha, lambda }])
    }

    pub fn terms(&self) -> &[PowerTerm] {
        &self.terms
    }

    /// Terms with a non-zero coupling.
    pub fn active_terms(&self) -> impl Iterator<Item = &PowerTerm> {
        self.terms.iter().filter(|t| t.alpha > 0.0)
    }

    pub fn has_active_term(&self) -> bool {
        self.active_terms().next().is_some()
    }

    pub fn value(&self, r: f64) -> f64 {
        self.terms.iter().map(|t| t.value(r)).sum()
    }

    pub fn derivative(&self, r: f64) -> f64 {
        self.terms.iter().map(|t| t.derivative(r)).sum()
    }

    /// Total Coulomb strength `a` of the `λ = −1` terms.
    pub fn coulomb_strength(&self) -> f64 {
        self.active_terms()
            .filter(|t| t.lambda == -1.0)
            .map(|t| t.alpha)
            .sum()
    }

    /// True if every active term is a pure Coulomb term.
    pub fn is_pure_coulomb(&self) -> bool {
        self.has_active_term() && self.active_terms().all(|t| t.lambda == -1.0)
    }

    /// True if some active term grows without bound at large distance.
    pub fn is_confining(&self) -> bool {
        self.active_terms().any(|t| t.lambda > 0.0)
    }

    /// Asymptotic value at `r → ∞` for non-confining potentials (zero).
    pub fn threshold(&self) -> Option<f64> {
        (!self.is_confining()).then_some(0.0)
    }
}

impl TryFrom<Vec<PowerTerm>> for PowerLawPotential {
    type Error = AfmError;

    fn try_from(terms: Vec<PowerTerm>) -> Result<Self> {
        Self::new(terms)
    }
}

impl From<PowerLawPotential> for Vec<PowerTerm> {
    fn from(v: PowerLawPotential) -> Self {
        v.terms
    }
}
