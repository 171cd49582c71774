//! The global quantum number `Q` of power-law spectra.
//!
//! For `H = p²/(2μ) + ρ·sgn(p)·r^p`,
//!
//! ```text
//! ε = (p+2)/(2p) · (|p|ρ)^(2/(p+2)) · (Q²/μ)^(p/(p+2))
//! ```

use crate::airy::airy_ai_zero;
use crate::error::{AfmError, Result};
use crate::nr_oracle::nr_eigenvalue_auto;
use crate::quantum::{GlobalQ, QSource, QuantumState};

/// Starting size of the oracle grid; it is doubled up to twice.
pub const ORACLE_POINTS: usize = 128;

fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p > -2.0 && p != 0.0 {
        Ok(())
    } else {
        Err(AfmError::DomainError(format!(
            "exponent must satisfy p > -2 and p != 0, got {p}"
        )))
    }
}

/// Analytic `Q` for `p = 2`, `p = 1` (`l = 0` only) and `p = −1`.
pub fn q_exact(p: f64, state: QuantumState) -> Result<GlobalQ> {
    let (n, l) = (state.n as f64, state.l as f64);
    if p == 2.0 {
        GlobalQ::new(2.0 * n + l + 1.5, QSource::AnalyticP2)
    } else if p == 1.0 && state.l == 0 {
        // ε = (ρ²/2μ)^(1/3)·|α_n| matched to the parameterisation above
        let z = -airy_ai_zero(state.n);
        GlobalQ::new(2.0 * (z / 3.0).powf(1.5), QSource::AnalyticP1)
    } else if p == -1.0 {
        GlobalQ::new(n + l + 1.0, QSource::AnalyticPm1)
    } else {
        Err(AfmError::UnsupportedCase {
            p,
            n: state.n,
            l: state.l,
        })
    }
}

/// Energy of the power-law Hamiltonian for a given `Q`.
pub fn epsilon_from_q(q: f64, mu: f64, rho: f64, p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok((p + 2.0) / (2.0 * p)
        * (p.abs() * rho).powf(2.0 / (p + 2.0))
        * (q * q / mu).powf(p / (p + 2.0)))
}

/// Invert the parameterisation for `Q`.
pub fn invert_q(epsilon: f64, mu: f64, rho: f64, p: f64) -> Result<GlobalQ> {
    check_exponent(p)?;
    if !(mu > 0.0 && rho > 0.0) {
        return Err(AfmError::DomainError(format!(
            "mu and rho must be positive, got mu = {mu}, rho = {rho}"
        )));
    }
    // (p+2)/(2p) has the sign of p
    if epsilon == 0.0 || epsilon.signum() != p.signum() {
        return Err(AfmError::DomainError(format!(
            "energy {epsilon} has the wrong sign for exponent {p}"
        )));
    }
    let base = 2.0 * p * epsilon / ((p + 2.0) * (p.abs() * rho).powf(2.0 / (p + 2.0)));
    GlobalQ::new(
        mu.sqrt() * base.powf((p + 2.0) / (2.0 * p)),
        QSource::Numeric { p },
    )
}

/// `Q` from the energy of the nonrelativistic oracle at coupling `(μ, ρ)`.
pub fn q_numeric_at(p: f64, state: QuantumState, mu: f64, rho: f64) -> Result<GlobalQ> {
    check_exponent(p)?;
    let seed = if p > 0.0 {
        2.0 * state.n as f64 + state.l as f64 + 1.5
    } else {
        (state.n + state.l + 1) as f64
    };
    let guess = epsilon_from_q(seed, mu, rho, p)?;
    let pair = nr_eigenvalue_auto(mu, rho, p, state, ORACLE_POINTS, guess)?;
    invert_q(pair.energy, mu, rho, p)
}

/// `Q` for any admissible exponent, computed numerically.
pub fn q_numeric(p: f64, state: QuantumState) -> Result<GlobalQ> {
    q_numeric_at(p, state, 1.0, 1.0)
}
