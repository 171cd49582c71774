use serde::{Deserialize, Serialize};

use crate::error::{AfmError, Result};

/// Radial excitation `n` and orbital angular momentum `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumState {
    pub n: u32,
    pub l: u32,
}

impl QuantumState {
    pub const GROUND: QuantumState = QuantumState { n: 0, l: 0 };

    pub fn new(n: u32, l: u32) -> Self {
        Self { n, l }
    }
}

/// Where a [`GlobalQ`] value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QSource {
    /// Harmonic auxiliary potential, `Q = 2n + l + 3/2`.
    AnalyticP2,
    /// Linear auxiliary potential at `l = 0`, from the zeros of Ai.
    AnalyticP1,
    /// Coulomb auxiliary potential, `Q = n + l + 1`.
    AnalyticPm1,
    /// Inverted from a numerically computed nonrelativistic eigenvalue.
    Numeric { p: f64 },
    /// Supplied by the caller, optionally tagged with the auxiliary exponent it
    /// was derived for (needed to certify a bound).
    Supplied { p: Option<f64> },
}

impl QSource {
    /// Auxiliary exponent `p` of the power-law potential behind this value.
    pub fn exponent(&self) -> Option<f64> {
        match *self {
            QSource::AnalyticP2 => Some(2.0),
            QSource::AnalyticP1 => Some(1.0),
            QSource::AnalyticPm1 => Some(-1.0),
            QSource::Numeric { p } => Some(p),
            QSource::Supplied { p } => p,
        }
    }

    pub fn tag(&self) -> String {
        match *self {
            QSource::AnalyticP2 => "analytic_p2".into(),
            QSource::AnalyticP1 => "analytic_p1".into(),
            QSource::AnalyticPm1 => "analytic_pm1".into(),
            QSource::Numeric { p } => format!("numeric({p})"),
            QSource::Supplied { p: Some(p) } => format!("supplied({p})"),
            QSource::Supplied { p: None } => "supplied".into(),
        }
    }
}

/// The global quantum number `Q` of a power-law nonrelativistic spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlobalQ {
    value: f64,
    source: QSource,
}

impl GlobalQ {
    pub fn new(value: f64, source: QSource) -> Result<Self> {
        if !(value.is_finite() && value > 0.0) {
            return Err(AfmError::DomainError(format!(
                "Q must be positive and finite, got {value}"
            )));
        }
        Ok(Self { value, source })
    }

    /// A caller-chosen `Q` tagged with the auxiliary exponent it stands for.
    pub fn supplied(value: f64, p: Option<f64>) -> Result<Self> {
        Self::new(value, QSource::Supplied { p })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn source(&self) -> QSource {
        self.source
    }

    pub fn exponent(&self) -> Option<f64> {
        self.source.exponent()
    }
}
