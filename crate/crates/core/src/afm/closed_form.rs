//! Closed-form AFM solutions for one massless particle (Coulomb, linear),
//! their symmetric-operator counterparts, and the linear-potential limits.

use crate::error::{AfmError, Result};
use crate::potential::PowerLawPotential;
use crate::quantum::GlobalQ;
use crate::roots::{bisect, scan_log};

use super::{certify, AfmSolution};

/// Below `m / M₀ = MASSLESS_GUARD` the linear mass is taken from the series.
const MASSLESS_GUARD: f64 = 1e-4;

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(AfmError::DomainError(format!("{name} must be positive, got {x}")))
    }
}

fn massless_partner(m: f64, r0: f64, mass: f64, v: &PowerLawPotential, q: GlobalQ) -> AfmSolution {
    let p0 = q.value() / r0;
    AfmSolution {
        r0,
        p0,
        nu1: p0,
        nu2: p0.hypot(m),
        mass,
        q,
        certified_upper_bound: certify(v, &q),
    }
}

/// Coulomb potential `−a/r` between a massless particle and one of mass `m`.
///
/// A solution exists only for `a/2 < Q < a`.
pub fn coulomb_closed(m: f64, a: f64, q: GlobalQ) -> Result<AfmSolution> {
    positive("m", m)?;
    positive("a", a)?;
    let qv = q.value();
    if qv >= a {
        return Err(AfmError::NoBoundState(format!(
            "no binding: Q = {qv} >= a = {a}"
        )));
    }
    if qv <= a / 2.0 {
        return Err(AfmError::CollapseDetected(format!(
            "collapse: Q = {qv} <= a/2 = {}",
            a / 2.0
        )));
    }
    let r0 = (qv / m) * (a * (2.0 * qv - a)).sqrt() / (a - qv);
    let x = a / (2.0 * qv);
    let mass = 2.0 * m * (x * (1.0 - x)).sqrt();
    Ok(massless_partner(m, r0, mass, &PowerLawPotential::coulomb(a)?, q))
}

/// Coulomb AFM mass of `σ·√(p² + m²) − a/r`.
pub fn coulomb_symmetric(sigma: f64, m: f64, a: f64, q: GlobalQ) -> Result<f64> {
    positive("sigma", sigma)?;
    if !(m.is_finite() && m >= 0.0 && a.is_finite() && a >= 0.0) {
        return Err(AfmError::DomainError(format!(
            "m and a must be non-negative, got m = {m}, a = {a}"
        )));
    }
    let y = a / (sigma * q.value());
    if y >= 1.0 {
        return Err(AfmError::NoBoundState(format!(
            "no binding: a = {a} >= sigma*Q = {}",
            sigma * q.value()
        )));
    }
    Ok(sigma * m * (1.0 - y * y).sqrt())
}

/// `r0` for one massless particle and one of mass `m`, from
/// `Q + Q²/√(Q² + m²r0²) = Σ|λ|·α·r0^(λ+1)`.
pub fn massless_transcendental(m: f64, v: &PowerLawPotential, q: GlobalQ) -> Result<f64> {
    if !(m.is_finite() && m >= 0.0) {
        return Err(AfmError::DomainError(format!("m must be non-negative, got {m}")));
    }
    if !v.has_active_term() {
        return Err(AfmError::InvalidPotential(
            "potential needs at least one term with non-zero coupling".into(),
        ));
    }
    let qv = q.value();
    let force = |r: f64| -> f64 {
        v.active_terms()
            .map(|t| t.lambda.abs() * t.alpha * r.powf(t.lambda + 1.0))
            .sum()
    };
    let h = |r: f64| force(r) - qv - qv * qv / (qv * qv + m * m * r * r).sqrt();
    let mass = |r: f64| {
        let p = qv / r;
        p + p.hypot(m) + v.value(r)
    };

    let mut scale: f64 = if m > 0.0 { qv / m } else { 0.0 };
    for t in v.active_terms().filter(|t| t.lambda != -1.0) {
        scale = scale.max((qv / t.alpha).powf(1.0 / (t.lambda + 1.0)));
    }
    if !(scale.is_finite() && scale > 0.0) {
        scale = 1.0;
    }
    let (brackets, h_first, _) = scan_log(h, scale * 1e-6, scale * 1e6, 40);
    let root = brackets
        .iter()
        .filter(|b| b.2)
        .map(|&(lo, hi, _)| bisect(h, lo, hi, 0.0))
        .min_by(|x, y| mass(*x).total_cmp(&mass(*y)));
    match root {
        Some(r) if mass(r) > 0.0 => Ok(r),
        Some(r) => Err(AfmError::CollapseDetected(format!(
            "mass {} at r0 = {r} is not positive",
            mass(r)
        ))),
        None if h_first > 0.0 => Err(AfmError::CollapseDetected(format!(
            "r0 -> 0 for Q = {qv}"
        ))),
        None => Err(AfmError::NoBoundState(format!("no root for Q = {qv}"))),
    }
}

/// Symmetric massless linear mass `M₀^(σ) = 2√(σ·b·Q)`.
pub fn linear_symmetric_massless(sigma: f64, b: f64, q: GlobalQ) -> Result<f64> {
    positive("sigma", sigma)?;
    positive("b", b)?;
    Ok(2.0 * (sigma * b * q.value()).sqrt())
}

fn m0_two(b: f64, q: f64) -> f64 {
    2.0 * (2.0 * b * q).sqrt()
}

/// Linear potential `b·r` between a massless particle and one of mass `m`.
pub fn linear_closed(m: f64, b: f64, q: GlobalQ) -> Result<AfmSolution> {
    positive("b", b)?;
    if !(m.is_finite() && m >= 0.0) {
        return Err(AfmError::DomainError(format!("m must be non-negative, got {m}")));
    }
    let qv = q.value();
    // r0² = Q/b − Q²/(2m²) + Q^(3/2)/(2m²)·√(Q + 4m²/b), with the
    // difference of the last two terms rationalised.
    let s = (1.0 + 4.0 * m * m / (b * qv)).sqrt();
    let r0 = ((qv / b) * (1.0 + 2.0 / (1.0 + s))).sqrt();

    let m0 = m0_two(b, qv);
    let mass = if m < MASSLESS_GUARD * m0 {
        let t2 = (m / m0).powi(2);
        m0 * (1.0 + 2.0 * t2 - 10.0 * t2 * t2)
    } else {
        let root = (m0 * m0 + 32.0 * m * m).sqrt();
        let a_plus = root + m0;
        let a_minus = 32.0 * m * m / a_plus;
        let b_plus = (m0 * a_plus + 16.0 * m * m).sqrt();
        let b_minus = (m0 * a_minus + 16.0 * m * m).sqrt();
        let sqrt2 = std::f64::consts::SQRT_2;
        (sqrt2 * m0 * m0 * a_minus + 16.0 * m * m * (2.0 * sqrt2 * m0 + b_plus))
            / (16.0 * m * b_minus)
    };
    Ok(massless_partner(m, r0, mass, &PowerLawPotential::linear(b)?, q))
}

/// Small-mass expansion `M₀ + 2m²/M₀` with `M₀ = 2√(2bQ)`.
pub fn linear_ur_expansion(m: f64, b: f64, q: GlobalQ) -> Result<f64> {
    positive("b", b)?;
    let m0 = m0_two(b, q.value());
    Ok(m0 + 2.0 * m * m / m0)
}

/// Large-mass expansion `m + M₀' + M₀'²/(8m)` with `M₀' = 2√(bQ)`.
pub fn linear_nr_expansion(m: f64, b: f64, q: GlobalQ) -> Result<f64> {
    positive("b", b)?;
    if !(m.is_finite() && m > 0.0) {
        return Err(AfmError::DomainError(format!(
            "the nonrelativistic expansion needs m > 0, got {m}"
        )));
    }
    let m1 = 2.0 * (b * q.value()).sqrt();
    Ok(m + m1 + m1 * m1 / (8.0 * m))
}

/// The ratio `t = m/M₀` where the two expansions meet:
/// `1 + 2t² = t + 1/√2 + 1/(16t)`. Independent of `b` and `Q`.
pub fn expansion_crossing() -> f64 {
    let f = |t: f64| 1.0 + 2.0 * t * t - t - std::f64::consts::FRAC_1_SQRT_2 - 1.0 / (16.0 * t);
    bisect(f, 0.05, 2.0, 0.0)
}
