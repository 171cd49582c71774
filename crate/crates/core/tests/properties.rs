use proptest::prelude::*;

use salpeter_afm::afm::closed_form::{coulomb_closed, linear_closed, linear_ur_expansion};
use salpeter_afm::afm::{mass_shell_mismatch, rotation_radii, solve_afm};
use salpeter_afm::potential::PowerLawPotential;
use salpeter_afm::q::{epsilon_from_q, invert_q};
use salpeter_afm::quantum::GlobalQ;

fn q(v: f64) -> GlobalQ {
    GlobalQ::supplied(v, None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exchange_symmetry(m1 in 0.0f64..4.0, m2 in 0.0f64..4.0, a in 0.0f64..1.0,
                         b in 0.05f64..2.0, qv in 0.5f64..5.0) {
        let v = PowerLawPotential::funnel(a, b).unwrap();
        let x = solve_afm(m1, m2, &v, q(qv)).unwrap();
        let y = solve_afm(m2, m1, &v, q(qv)).unwrap();
        prop_assert!((x.mass - y.mass).abs() <= 1e-12 * x.mass);
        prop_assert!((x.nu1 - y.nu2).abs() <= 1e-10 * x.nu1.max(1.0));
        let (r1, r2) = rotation_radii(&x);
        let (s1, s2) = rotation_radii(&y);
        prop_assert!((r1 - s2).abs() <= 1e-10 * x.r0 && (r2 - s1).abs() <= 1e-10 * x.r0);
    }

    #[test]
    fn coulomb_mass_rises_with_q(m in 0.1f64..5.0, a in 0.2f64..2.0,
                                 f1 in 0.51f64..0.99, f2 in 0.51f64..0.99) {
        let (lo, hi) = if f1 < f2 { (f1, f2) } else { (f2, f1) };
        prop_assume!(hi - lo > 1e-6);
        let m_lo = coulomb_closed(m, a, q(lo * a)).unwrap().mass;
        let m_hi = coulomb_closed(m, a, q(hi * a)).unwrap().mass;
        prop_assert!(m_hi > m_lo);
    }

    #[test]
    fn linear_closed_matches_numeric(m in 0.0f64..5.0, b in 0.05f64..2.0, qv in 0.5f64..6.0) {
        let v = PowerLawPotential::linear(b).unwrap();
        let c = linear_closed(m, b, q(qv)).unwrap();
        let s = solve_afm(0.0, m, &v, q(qv)).unwrap();
        prop_assert!((c.mass - s.mass).abs() <= 1e-9 * s.mass);
        prop_assert!(mass_shell_mismatch(&c, 0.0, m) < 1e-12);
        // the series is a lower estimate of the exact mass at small m
        prop_assert!(linear_ur_expansion(m, b, q(qv)).unwrap() >= c.mass * (1.0 - 1e-12));
    }

    #[test]
    fn q_parameterisation_inverts(p in prop_oneof![-1.9f64..-0.05, 0.05f64..4.0],
                                  qv in 0.3f64..8.0, mu in 0.1f64..5.0, rho in 0.1f64..5.0) {
        let e = epsilon_from_q(qv, mu, rho, p).unwrap();
        let back = invert_q(e, mu, rho, p).unwrap().value();
        prop_assert!((back / qv - 1.0).abs() < 1e-9);
    }
}
