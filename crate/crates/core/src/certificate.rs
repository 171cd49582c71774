//! Upper-bound certification by concavity of `g` in `V(r) = g(sgn(p)·r^p)`.

use serde::{Deserialize, Serialize};

use crate::error::{AfmError, Result};
use crate::potential::PowerLawPotential;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundReason {
    /// `V ∝ P`: every active term has `λ = p`.
    Proportional,
    /// Every term of `g` has non-positive second derivative.
    ConcaveG,
    NotCertified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub is_upper_bound: bool,
    pub reason: BoundReason,
}

/// Decide whether the AFM value with auxiliary exponent `p` bounds the true
/// eigenvalue from above.
///
/// A term `sgn(λ)·α·r^λ` is `sgn(λ)·α·|y|^(λ/p)` in `y = sgn(p)·r^p`, whose
/// second derivative has the sign of `sgn(λ)·k·(k−1)` with `k = λ/p`. The test
/// is applied term by term, so a sum whose curvatures only cancel in total is
/// reported as not certified.
pub fn concavity_certificate(v: &PowerLawPotential, p: f64) -> Result<BoundCertificate> {
    if !(p.is_finite() && p > -2.0 && p != 0.0) {
        return Err(AfmError::DomainError(format!(
            "auxiliary exponent must satisfy p > -2 and p != 0, got {p}"
        )));
    }
    let active: Vec<_> = v.active_terms().collect();
    if active.is_empty() {
        return Ok(BoundCertificate {
            is_upper_bound: false,
            reason: BoundReason::NotCertified,
        });
    }
    if active.iter().all(|t| t.lambda == p) {
        return Ok(BoundCertificate {
            is_upper_bound: true,
            reason: BoundReason::Proportional,
        });
    }
    let concave = active.iter().all(|t| {
        let k = t.lambda / p;
        t.lambda.signum() * k * (k - 1.0) <= 0.0
    });
    Ok(if concave {
        BoundCertificate {
            is_upper_bound: true,
            reason: BoundReason::ConcaveG,
        }
    } else {
        BoundCertificate {
            is_upper_bound: false,
            reason: BoundReason::NotCertified,
        }
    })
}
