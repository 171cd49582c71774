//! JSON run configuration. Masses, couplings and lengths are in GeV units
//! (`GeV`, `GeV^(1−λ)` for a coupling of `r^λ`, `GeV⁻¹` for lengths).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use salpeter_afm::kinematics::Kinematics;
use salpeter_afm::potential::{PowerLawPotential, PowerTerm};
use salpeter_afm::q::{q_exact, q_numeric};
use salpeter_afm::quantum::{GlobalQ, QuantumState};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Bound,
    Reference,
    Scan,
    Qtable,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    #[serde(rename = "coulomb-paper")]
    Coulomb,
    LinearLimits,
    Bounds,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Coulomb, Suite::LinearLimits, Suite::Bounds];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Coulomb => "coulomb-paper",
            Suite::LinearLimits => "linear-limits",
            Suite::Bounds => "bounds",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanVariable {
    /// The last entry of `masses`.
    M,
    /// The global quantum number.
    Q,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub box_radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub variable: ScanVariable,
    /// Explicit values; otherwise `start..=stop` in steps of `step`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    /// Whether mass scans also run the reference eigensolver (default true).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<bool>,
}

impl ScanConfig {
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        if let Some(v) = &self.values {
            if self.start.is_some() || self.stop.is_some() || self.step.is_some() {
                return Err(CliError::Config(
                    "scan takes either `values` or `start`/`stop`/`step`, not both".into(),
                ));
            }
            return finite(v.clone(), "scan value");
        }
        let (Some(start), Some(stop), Some(step)) = (self.start, self.stop, self.step) else {
            return Err(CliError::Config(
                "scan needs `values` or all of `start`, `stop`, `step`".into(),
            ));
        };
        if !(start.is_finite() && stop.is_finite() && step.is_finite() && step > 0.0) {
            return Err(CliError::Config(format!(
                "scan range needs finite bounds and a positive step, got {start}..{stop} by {step}"
            )));
        }
        if stop < start {
            return Ok(Vec::new());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|i| start + i as f64 * step).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QtableConfig {
    pub exponents: Vec<f64>,
    pub states: Vec<QuantumState>,
}

impl Default for QtableConfig {
    fn default() -> Self {
        Self {
            exponents: vec![2.0, 1.0, -1.0],
            states: (0..3).map(|n| QuantumState::new(n, 0)).collect(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    /// `[m1, m2]`, or `[m]` together with `sigma`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub masses: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub potential: Vec<PowerTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<QuantumState>,
    /// States for scans; defaults to `[state]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<QuantumState>>,
    /// Auxiliary exponent `p` whose `Q(n, l)` is used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub auxiliary_exponent: Option<f64>,
    /// Explicit `Q`; tagged with `auxiliary_exponent` when both are given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qtable: Option<QtableConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
}

fn finite(v: Vec<f64>, what: &str) -> Result<Vec<f64>, CliError> {
    match v.iter().find(|x| !x.is_finite()) {
        Some(x) => Err(CliError::Config(format!("{what} must be finite, got {x}"))),
        None => Ok(v),
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn state(&self) -> QuantumState {
        self.state.unwrap_or(QuantumState::GROUND)
    }

    pub fn states(&self) -> Vec<QuantumState> {
        self.states.clone().unwrap_or_else(|| vec![self.state()])
    }

    pub fn potential(&self) -> Result<PowerLawPotential, CliError> {
        if self.potential.is_empty() {
            return Err(CliError::Config("`potential` needs at least one term".into()));
        }
        let v = PowerLawPotential::new(self.potential.clone())
            .map_err(|e| CliError::Config(e.to_string()))?;
        if !v.has_active_term() {
            return Err(CliError::Config(
                "`potential` needs a term with non-zero coupling".into(),
            ));
        }
        Ok(v)
    }

    /// Kinematics with the last mass optionally replaced.
    pub fn kinematics_with(&self, last_mass: Option<f64>) -> Result<Kinematics, CliError> {
        let mut masses = self.masses.clone();
        if let Some(m) = last_mass {
            match masses.last_mut() {
                Some(last) => *last = m,
                None => masses.push(m),
            }
            if self.sigma.is_none() && masses.len() == 1 {
                masses.insert(0, 0.0);
            }
        }
        let kin = match (self.sigma, masses.as_slice()) {
            (Some(sigma), [m]) => Kinematics::symmetric(sigma, *m),
            (None, [m1, m2]) => Kinematics::two_body(*m1, *m2),
            (Some(_), _) => {
                return Err(CliError::Config(
                    "with `sigma`, `masses` must hold exactly one mass".into(),
                ))
            }
            (None, _) => {
                return Err(CliError::Config("`masses` must be [m1, m2]".into()))
            }
        };
        kin.map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn kinematics(&self) -> Result<Kinematics, CliError> {
        self.kinematics_with(None)
    }

    /// `Q` from the explicit value or the auxiliary exponent.
    pub fn global_q(&self, state: QuantumState) -> Result<Option<GlobalQ>, CliError> {
        match (self.q, self.auxiliary_exponent) {
            (Some(q), p) => GlobalQ::supplied(q, p)
                .map(Some)
                .map_err(|e| CliError::Config(e.to_string())),
            (None, Some(p)) => q_for_exponent(p, state).map(Some),
            (None, None) => Ok(None),
        }
    }

    pub fn grid_points(&self) -> Option<usize> {
        self.grid.as_ref().and_then(|g| g.points)
    }

    pub fn box_radius(&self) -> Option<f64> {
        self.grid.as_ref().and_then(|g| g.box_radius)
    }
}

/// Analytic `Q` where known, numeric otherwise.
pub fn q_for_exponent(p: f64, state: QuantumState) -> Result<GlobalQ, CliError> {
    match q_exact(p, state) {
        Ok(q) => Ok(q),
        Err(salpeter_afm::error::AfmError::UnsupportedCase { .. }) => {
            q_numeric(p, state).map_err(CliError::Afm)
        }
        Err(e) => Err(CliError::Config(e.to_string())),
    }
}
