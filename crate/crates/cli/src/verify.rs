//! Named verification suites.

use rayon::prelude::*;

use salpeter_afm::afm::closed_form::{
    expansion_crossing, linear_closed, linear_nr_expansion, linear_symmetric_massless,
    linear_ur_expansion,
};
use salpeter_afm::afm::solve_afm;
use salpeter_afm::error::AfmError;
use salpeter_afm::potential::PowerLawPotential;
use salpeter_afm::q::q_exact;
use salpeter_afm::quantum::{GlobalQ, QuantumState};
use salpeter_afm::sse::{bound_gap, SseProblem};

use crate::config::Suite;
use crate::table::{fmt_g, Table};

pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub pass: bool,
    pub value: Option<f64>,
    pub detail: String,
}

fn within(suite: Suite, name: &str, value: Result<f64, AfmError>, want: f64, tol: f64) -> Check {
    match value {
        Ok(x) => Check {
            suite,
            name: name.into(),
            pass: (x - want).abs() <= tol,
            value: Some(x),
            detail: format!("expected {} ± {}", fmt_g(want), fmt_g(tol)),
        },
        Err(e) => Check {
            suite,
            name: name.into(),
            pass: false,
            value: None,
            detail: e.to_string(),
        },
    }
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|x| fmt_g(*x)).collect::<Vec<_>>().join(" ")
}

fn q(v: f64) -> GlobalQ {
    GlobalQ::supplied(v, None).expect("positive Q")
}

fn coulomb_values() -> Vec<Check> {
    let s = Suite::Coulomb;
    let v = PowerLawPotential::coulomb(1.2).expect("valid coupling");
    let q1 = q_exact(-1.0, QuantumState::GROUND).expect("analytic Q");
    let afm = solve_afm(0.0, 1.0, &v, q1).map(|s| s.mass);
    let problem = SseProblem::two_body(0.0, 1.0, v.clone(), QuantumState::GROUND).expect("valid masses");
    let gap = bound_gap(&problem, &[q1]).map(|g| g[0]);
    let mut checks = vec![
        within(s, "afm_mass", afm, 0.9798, 1e-4),
        within(s, "reference_mass", gap.clone().map(|g| g.m_ref), 0.8454, 0.003),
        within(s, "gap", gap.map(|g| g.gap), 0.1344, 0.003),
    ];
    let unbound = matches!(solve_afm(0.0, 1.0, &v, q(2.0)), Err(AfmError::NoBoundState(_)));
    let collapse = matches!(solve_afm(0.0, 1.0, &v, q(0.6)), Err(AfmError::CollapseDetected(_)));
    checks.push(Check {
        suite: s,
        name: "existence_window".into(),
        pass: unbound && collapse,
        value: None,
        detail: format!("Q=2 unbound: {unbound}, Q=0.6 collapses: {collapse}"),
    });
    checks
}

fn linear_limits() -> Vec<Check> {
    let s = Suite::LinearLimits;
    let (b, qq) = (0.2, q(1.5));
    let m0 = linear_symmetric_massless(2.0, b, qq).expect("positive slope");
    let rel_err = |t: f64, f: fn(f64, f64, GlobalQ) -> Result<f64, AfmError>| {
        let m = t * m0;
        let exact = linear_closed(m, b, qq).expect("closed form").mass;
        (f(m, b, qq).expect("expansion") - exact).abs() / exact
    };
    let ur: Vec<f64> = [0.1, 0.05, 0.025].iter().map(|&t| rel_err(t, linear_ur_expansion)).collect();
    let nr: Vec<f64> = [4.0, 8.0, 16.0].iter().map(|&t| rel_err(t, linear_nr_expansion)).collect();
    let t = expansion_crossing();
    let at_crossing = rel_err(t, linear_ur_expansion);
    vec![
        Check {
            suite: s,
            name: "ultrarelativistic_convergence".into(),
            pass: ur[1] < ur[0] / 8.0 && ur[2] < ur[1] / 8.0,
            value: Some(ur[2]),
            detail: format!("relative errors {} at m/M0 = 0.1, 0.05, 0.025", list(&ur)),
        },
        Check {
            suite: s,
            name: "nonrelativistic_convergence".into(),
            pass: nr[1] < nr[0] / 2.0 && nr[2] < nr[1] / 2.0,
            value: Some(nr[2]),
            detail: format!("relative errors {} at m/M0 = 4, 8, 16", list(&nr)),
        },
        within(s, "crossing", Ok(t), 0.34, 0.02),
        within(s, "crossing_error", Ok(at_crossing), 0.055, 0.01),
    ]
}

fn bounds() -> Vec<Check> {
    let s = Suite::Bounds;
    let b = 0.2;
    let v = PowerLawPotential::linear(b).expect("valid slope");
    let rows: Vec<(QuantumState, f64)> = (0..2)
        .flat_map(|n| (0..=10).map(move |i| (QuantumState::new(n, 0), 0.1 * i as f64)))
        .collect();
    rows.par_iter()
        .map(|&(state, m)| {
            let q1 = q_exact(1.0, state).expect("analytic Q");
            let q2 = q_exact(2.0, state).expect("analytic Q");
            let name = format!("n={} m={}", state.n, fmt_g(m));
            let result = SseProblem::two_body(0.0, m, v.clone(), state)
                .and_then(|p| bound_gap(&p, &[q1, q2]));
            match result {
                Ok(gaps) => {
                    let worst = gaps.iter().map(|g| g.gap).fold(f64::INFINITY, f64::min);
                    let certified = gaps.iter().all(|g| g.certified);
                    Check {
                        suite: s,
                        name,
                        pass: certified && worst >= -1e-4,
                        value: Some(worst),
                        detail: format!(
                            "M_ref {}, gaps Q1 {} Q2 {}",
                            fmt_g(gaps[0].m_ref),
                            fmt_g(gaps[0].gap),
                            fmt_g(gaps[1].gap)
                        ),
                    }
                }
                Err(e) => Check {
                    suite: s,
                    name,
                    pass: false,
                    value: None,
                    detail: e.to_string(),
                },
            }
        })
        .collect()
}

pub fn run_suite(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Coulomb => coulomb_values(),
        Suite::LinearLimits => linear_limits(),
        Suite::Bounds => bounds(),
    }
}

pub fn report(checks: &[Check]) -> Table {
    let mut t = Table::new(&["suite", "check", "result", "value", "detail"]);
    for c in checks {
        t.push(vec![
            c.suite.name().into(),
            c.name.clone().into(),
            if c.pass { "PASS" } else { "FAIL" }.into(),
            c.value.into(),
            c.detail.clone().into(),
        ]);
    }
    t
}
