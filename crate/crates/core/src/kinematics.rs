use serde::{Deserialize, Serialize};

use crate::error::{AfmError, Result};

/// Relativistic kinetic energy of the bound system.
///
/// `TwoBody` is `√(p²+m₁²) + √(p²+m₂²)`; `Symmetric` is `σ·√(p²+m²)`, which
/// covers one-body (σ = 1) and equal-mass two-body (σ = 2) problems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kinematics {
    TwoBody { m1: f64, m2: f64 },
    Symmetric { sigma: f64, m: f64 },
}

impl Kinematics {
    pub fn two_body(m1: f64, m2: f64) -> Result<Self> {
        let k = Kinematics::TwoBody { m1, m2 };
        k.validate()?;
        Ok(k)
    }

    pub fn symmetric(sigma: f64, m: f64) -> Result<Self> {
        let k = Kinematics::Symmetric { sigma, m };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        let masses_ok = |m: f64| m.is_finite() && m >= 0.0;
        match *self {
            Kinematics::TwoBody { m1, m2 } if masses_ok(m1) && masses_ok(m2) => Ok(()),
            Kinematics::Symmetric { sigma, m } if masses_ok(m) && sigma.is_finite() && sigma > 0.0 => {
                Ok(())
            }
            _ => Err(AfmError::DomainError(format!(
                "masses must be non-negative and sigma positive: {self:?}"
            ))),
        }
    }

    /// Kinetic energy at momentum `p`.
    pub fn energy(&self, p: f64) -> f64 {
        match *self {
            Kinematics::TwoBody { m1, m2 } => p.hypot(m1) + p.hypot(m2),
            Kinematics::Symmetric { sigma, m } => sigma * p.hypot(m),
        }
    }

    /// `p·dT/dp`, the left-hand side of the virial condition.
    pub fn virial(&self, p: f64) -> f64 {
        let term = |m: f64| {
            let nu = p.hypot(m);
            if nu == 0.0 {
                0.0
            } else {
                p * p / nu
            }
        };
        match *self {
            Kinematics::TwoBody { m1, m2 } => term(m1) + term(m2),
            Kinematics::Symmetric { sigma, m } => sigma * term(m),
        }
    }

    /// Rest energy, the kinetic energy at zero momentum.
    pub fn rest_energy(&self) -> f64 {
        self.energy(0.0)
    }

    /// Number of kinetic square roots; sets the short-distance strength `Σ|p|`.
    pub fn ultrarelativistic_weight(&self) -> f64 {
        match *self {
            Kinematics::TwoBody { .. } => 2.0,
            Kinematics::Symmetric { sigma, .. } => sigma,
        }
    }

    /// Square roots in the kinetic operator as `(weight, mass)` pairs.
    pub fn components(&self) -> Vec<(f64, f64)> {
        match *self {
            Kinematics::TwoBody { m1, m2 } => vec![(1.0, m1), (1.0, m2)],
            Kinematics::Symmetric { sigma, m } => vec![(sigma, m)],
        }
    }

    pub fn max_mass(&self) -> f64 {
        match *self {
            Kinematics::TwoBody { m1, m2 } => m1.max(m2),
            Kinematics::Symmetric { m, .. } => m,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn virial_is_p_times_derivative() {
        for k in [
            Kinematics::two_body(0.0, 1.0).unwrap(),
            Kinematics::two_body(0.3, 2.0).unwrap(),
            Kinematics::symmetric(2.0, 0.7).unwrap(),
        ] {
            for &p in &[0.01, 0.5, 3.0, 40.0] {
                let h = 1e-4 * p;
                let d = (k.energy(p + h) - k.energy(p - h)) / (2.0 * h);
                assert!((p * d - k.virial(p)).abs() < 1e-7 * k.virial(p).max(1e-12));
            }
        }
    }

    #[test]
    fn equal_mass_two_body_is_sigma_two() {
        let a = Kinematics::two_body(0.8, 0.8).unwrap();
        let b = Kinematics::symmetric(2.0, 0.8).unwrap();
        for &p in &[0.0, 0.2, 5.0] {
            assert_eq!(a.energy(p), b.energy(p));
        }
    }

    #[test]
    fn rejects_negative_mass() {
        assert!(Kinematics::two_body(-1.0, 1.0).is_err());
        assert!(Kinematics::symmetric(0.0, 1.0).is_err());
    }
}
