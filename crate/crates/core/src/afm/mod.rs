//! The auxiliary-field approximation reduced to its final scalar system:
//!
//! ```text
//! M  = √(p0² + m1²) + √(p0² + m2²) + V(r0)
//! p0 = Q / r0
//! p0²/√(p0² + m1²) + p0²/√(p0² + m2²) = r0·V'(r0)
//! ```
//!
//! The last line is the stationarity condition of `T(Q/r0) + V(r0)` in `r0`;
//! the solver picks the lowest local minimum of that function.

pub mod closed_form;

use serde::{Deserialize, Serialize};

use crate::certificate::concavity_certificate;
use crate::error::{AfmError, Result};
use crate::kinematics::Kinematics;
use crate::potential::PowerLawPotential;
use crate::quantum::GlobalQ;
use crate::roots::{bisect, scan_log};

/// Decades scanned on either side of the intrinsic length.
const SCAN_DECADES: f64 = 6.0;
const SCAN_PER_DECADE: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AfmSolution {
    /// Mean inter-particle distance (GeV⁻¹).
    pub r0: f64,
    /// Mean momentum per particle (GeV).
    pub p0: f64,
    pub nu1: f64,
    pub nu2: f64,
    /// Bound-state mass (GeV).
    pub mass: f64,
    pub q: GlobalQ,
    pub certified_upper_bound: bool,
}

/// Relative residuals of the mass, momentum and virial equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub mass: f64,
    pub momentum: f64,
    pub virial: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.mass.max(self.momentum).max(self.virial)
    }
}

pub(crate) fn certify(v: &PowerLawPotential, q: &GlobalQ) -> bool {
    q.exponent()
        .and_then(|p| concavity_certificate(v, p).ok())
        .is_some_and(|c| c.is_upper_bound)
}

/// Typical size of the solution: balance `Q/r` against each potential term,
/// and against the Compton-like length `Q/m` for Coulomb terms.
fn intrinsic_length(kin: &Kinematics, v: &PowerLawPotential, q: f64) -> f64 {
    let mut scale: f64 = 0.0;
    for t in v.active_terms() {
        if t.lambda != -1.0 {
            scale = scale.max((q / t.alpha).powf(1.0 / (t.lambda + 1.0)));
        }
    }
    let m = kin.max_mass();
    if m > 0.0 {
        scale = scale.max(q / m);
    }
    if scale > 0.0 && scale.is_finite() {
        scale
    } else {
        1.0
    }
}

fn assemble(kin: &Kinematics, v: &PowerLawPotential, q: GlobalQ, r0: f64) -> AfmSolution {
    let p0 = q.value() / r0;
    let (nu1, nu2) = match *kin {
        Kinematics::TwoBody { m1, m2 } => (p0.hypot(m1), p0.hypot(m2)),
        Kinematics::Symmetric { m, .. } => (p0.hypot(m), p0.hypot(m)),
    };
    let kinetic = match *kin {
        Kinematics::TwoBody { .. } => nu1 + nu2,
        Kinematics::Symmetric { sigma, .. } => sigma * nu1,
    };
    AfmSolution {
        r0,
        p0,
        nu1,
        nu2,
        mass: kinetic + v.value(r0),
        q,
        certified_upper_bound: certify(v, &q),
    }
}

/// Solve the AFM system for an arbitrary kinetic operator.
pub fn solve_with(kin: &Kinematics, v: &PowerLawPotential, q: GlobalQ) -> Result<AfmSolution> {
    kin.validate()?;
    if !v.has_active_term() {
        return Err(AfmError::InvalidPotential(
            "potential needs at least one term with non-zero coupling".into(),
        ));
    }
    let qv = q.value();
    let g = |r: f64| r * v.derivative(r) - kin.virial(qv / r);
    let mass_at = |r: f64| kin.energy(qv / r) + v.value(r);

    let scale = intrinsic_length(kin, v, qv);
    let lo = scale * 10f64.powf(-SCAN_DECADES);
    let hi = scale * 10f64.powf(SCAN_DECADES);
    let (brackets, g_first, _) = scan_log(g, lo, hi, SCAN_PER_DECADE);

    let best = brackets
        .iter()
        .filter(|b| b.2)
        .map(|&(a, b, _)| {
            let r = bisect(g, a, b, 0.0);
            (r, mass_at(r))
        })
        .min_by(|x, y| x.1.total_cmp(&y.1));

    let Some((r0, _)) = best else {
        return Err(if g_first > 0.0 {
            AfmError::CollapseDetected(format!(
                "r0 -> 0: the potential overwhelms the kinetic term for Q = {qv}"
            ))
        } else {
            AfmError::NoBoundState(format!(
                "r0 -> infinity: no stationary radius for Q = {qv}"
            ))
        });
    };
    let sol = assemble(kin, v, q, r0);
    if sol.mass <= 0.0 {
        return Err(AfmError::CollapseDetected(format!(
            "AFM mass {} is not positive for Q = {qv}",
            sol.mass
        )));
    }
    Ok(sol)
}

/// AFM solution of the two-body equation with masses `m1`, `m2`.
pub fn solve_afm(m1: f64, m2: f64, v: &PowerLawPotential, q: GlobalQ) -> Result<AfmSolution> {
    solve_with(&Kinematics::two_body(m1, m2)?, v, q)
}

/// AFM solution of `σ·√(p² + m²) + V`.
pub fn solve_afm_symmetric(
    sigma: f64,
    m: f64,
    v: &PowerLawPotential,
    q: GlobalQ,
) -> Result<AfmSolution> {
    solve_with(&Kinematics::symmetric(sigma, m)?, v, q)
}

fn rel(a: f64, b: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        (a - b).abs()
    } else {
        (a - b).abs() / scale
    }
}

/// Relative residuals of a solution with respect to the kinetic operator and
/// potential it claims to solve.
pub fn residuals(
    sol: &AfmSolution,
    kin: &Kinematics,
    v: &PowerLawPotential,
    q: &GlobalQ,
) -> Residuals {
    let (kinetic, virial_lhs) = match *kin {
        Kinematics::TwoBody { .. } => (
            sol.nu1 + sol.nu2,
            sol.p0 * sol.p0 / sol.nu1 + sol.p0 * sol.p0 / sol.nu2,
        ),
        Kinematics::Symmetric { sigma, .. } => {
            (sigma * sol.nu1, sigma * sol.p0 * sol.p0 / sol.nu1)
        }
    };
    let pot = v.value(sol.r0);
    let rhs = sol.r0 * v.derivative(sol.r0);
    Residuals {
        mass: rel(sol.mass, kinetic + pot, kinetic + pot.abs()),
        momentum: rel(sol.p0 * sol.r0, q.value(), q.value()),
        virial: rel(virial_lhs, rhs, virial_lhs.abs().max(rhs.abs())),
    }
}

/// Two-body residuals, with the masses also checked against `ν² − p0² = m²`.
pub fn residuals_two_body(
    sol: &AfmSolution,
    m1: f64,
    m2: f64,
    v: &PowerLawPotential,
    q: &GlobalQ,
) -> Residuals {
    residuals(sol, &Kinematics::TwoBody { m1, m2 }, v, q)
}

/// Split `r0` into the distances of each particle from the centre of a rigid
/// circular orbit: `r_i = r0·ν_j / (ν1 + ν2)`.
pub fn rotation_radii(sol: &AfmSolution) -> (f64, f64) {
    let total = sol.nu1 + sol.nu2;
    let r1 = sol.r0 * (sol.nu2 / total);
    let r2 = sol.r0 * (sol.nu1 / total);
    (r1, r2)
}

/// `ν_i² − p0²` should reproduce `m_i²`; relative mismatch of the worse one.
pub fn mass_shell_mismatch(sol: &AfmSolution, m1: f64, m2: f64) -> f64 {
    let check = |nu: f64, m: f64| {
        let lhs = nu * nu - sol.p0 * sol.p0;
        rel(lhs, m * m, nu * nu)
    };
    check(sol.nu1, m1).max(check(sol.nu2, m2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::QSource;

    fn q(v: f64) -> GlobalQ {
        GlobalQ::supplied(v, None).unwrap()
    }

    #[test]
    fn coulomb_massless_light_quark() {
        let v = PowerLawPotential::coulomb(1.2).unwrap();
        let qq = GlobalQ::new(1.0, QSource::AnalyticPm1).unwrap();
        let s = solve_afm(0.0, 1.0, &v, qq).unwrap();
        assert!((s.mass - 0.979_795_897_113_271_2).abs() < 1e-12);
        assert!((s.r0 - 4.898_979_485_566_357).abs() < 1e-9);
        assert!(s.certified_upper_bound);
        assert!(residuals_two_body(&s, 0.0, 1.0, &v, &qq).max() < 1e-10);
    }

    #[test]
    fn linear_heavy_light() {
        // Bisection of Q + Q²/√(Q²+m²r²) = b r² done separately gives these.
        let v = PowerLawPotential::linear(0.2).unwrap();
        let s = solve_afm(0.0, 1.0, &v, q(1.5)).unwrap();
        assert!((s.r0 - 3.261_009_239_384_366_6).abs() < 1e-10);
        assert!((s.mass - 2.212_900_944_166_755_8).abs() < 1e-10);
        assert!(!s.certified_upper_bound);
    }

    #[test]
    fn linear_two_massless() {
        let v = PowerLawPotential::linear(0.2).unwrap();
        let s = solve_afm(0.0, 0.0, &v, q(1.5)).unwrap();
        assert!((s.mass - 2.0 * (2.0f64 * 0.2 * 1.5).sqrt()).abs() < 1e-12);
        assert!((s.r0 - (2.0 * 1.5 / 0.2f64).sqrt()).abs() < 1e-11);
    }

    #[test]
    fn coulomb_window_edges() {
        let v = PowerLawPotential::coulomb(1.2).unwrap();
        assert!(matches!(solve_afm(0.0, 1.0, &v, q(2.0)), Err(AfmError::NoBoundState(_))));
        assert!(matches!(solve_afm(0.0, 1.0, &v, q(1.2)), Err(AfmError::NoBoundState(_))));
        assert!(matches!(solve_afm(0.0, 1.0, &v, q(0.6)), Err(AfmError::CollapseDetected(_))));
        assert!(matches!(solve_afm(0.0, 1.0, &v, q(0.3)), Err(AfmError::CollapseDetected(_))));
        assert!(solve_afm(0.0, 1.0, &v, q(0.61)).is_ok());
        assert!(solve_afm(0.0, 1.0, &v, q(1.19)).is_ok());
    }

    #[test]
    fn empty_potential_is_rejected() {
        let v = PowerLawPotential::new(vec![]).unwrap();
        assert!(matches!(solve_afm(1.0, 1.0, &v, q(1.0)), Err(AfmError::InvalidPotential(_))));
        let v = PowerLawPotential::single(0.0, 1.0).unwrap();
        assert!(solve_afm(1.0, 1.0, &v, q(1.0)).is_err());
    }

    #[test]
    fn exchange_symmetry_is_exact() {
        let v = PowerLawPotential::funnel(0.4, 0.18).unwrap();
        let a = solve_afm(0.3, 1.7, &v, q(1.5)).unwrap();
        let b = solve_afm(1.7, 0.3, &v, q(1.5)).unwrap();
        assert_eq!(a.mass, b.mass);
        assert_eq!(a.r0, b.r0);
    }

    #[test]
    fn perturbed_radius_breaks_virial() {
        let v = PowerLawPotential::coulomb(1.2).unwrap();
        let qq = q(1.0);
        let s = solve_afm(0.0, 1.0, &v, qq).unwrap();
        let mut bad = s;
        bad.r0 *= 1.01;
        let r = residuals_two_body(&bad, 0.0, 1.0, &v, &qq);
        assert!(r.virial > 1e-3, "{r:?}");
        assert!(r.momentum > 1e-3);
    }

    #[test]
    fn radii_split() {
        let v = PowerLawPotential::coulomb(1.2).unwrap();
        let s = solve_afm(0.0, 1.0, &v, q(1.0)).unwrap();
        let (r1, r2) = rotation_radii(&s);
        assert!((r1 - 4.082_482_904_638_63).abs() < 1e-9);
        assert!((r2 - 0.816_496_580_927_725_9).abs() < 1e-9);
        assert!((r1 + r2 - s.r0).abs() <= 4.0 * f64::EPSILON * s.r0);

        let v = PowerLawPotential::linear(0.3).unwrap();
        let s = solve_afm(0.9, 0.9, &v, q(2.5)).unwrap();
        let (r1, r2) = rotation_radii(&s);
        assert_eq!(r1, r2);
        assert!((r1 - s.r0 / 2.0).abs() <= f64::EPSILON * s.r0);
    }

    #[test]
    fn heavy_partner_sits_at_centre() {
        let v = PowerLawPotential::linear(0.2).unwrap();
        let base = solve_afm(0.0, 1.0, &v, q(1.5)).unwrap();
        let mut last = f64::INFINITY;
        for &m2 in &[1e1, 1e2, 1e3, 1e4] {
            let mut s = base;
            s.nu2 = s.p0.hypot(m2);
            let (_, r2) = rotation_radii(&s);
            assert!(r2 < last);
            last = r2;
        }
        assert!(last < 1e-3 * base.r0);
    }
}
