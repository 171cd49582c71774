//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use salpeter_afm::afm::closed_form::{
    coulomb_closed, coulomb_symmetric, expansion_crossing, linear_closed, linear_nr_expansion,
    linear_symmetric_massless, linear_ur_expansion,
};
use salpeter_afm::afm::{residuals_two_body, rotation_radii, solve_afm};
use salpeter_afm::error::AfmError;
use salpeter_afm::potential::{PowerLawPotential, PowerTerm};
use salpeter_afm::q::{q_exact, q_numeric};
use salpeter_afm::quantum::{GlobalQ, QuantumState};
use salpeter_afm::roots::bisect;
use salpeter_afm::sse::{sse_eigenvalue, SseProblem};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn q(v: f64) -> GlobalQ {
    GlobalQ::supplied(v, None).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn coulomb_afm_value() -> Outcome {
    let v = PowerLawPotential::coulomb(1.2).unwrap();
    let m = solve_afm(0.0, 1.0, &v, q(1.0)).map_err(|e| e.to_string())?.mass;
    check((m - 0.9798).abs() <= 1e-4, format!("M = {m:.9}"))
}

fn coulomb_reference_value() -> Outcome {
    let v = PowerLawPotential::coulomb(1.2).unwrap();
    let p = SseProblem::two_body(0.0, 1.0, v, QuantumState::GROUND).unwrap();
    let m = sse_eigenvalue(&p).map_err(|e| e.to_string())?;
    check((m - 0.8454).abs() <= 0.003, format!("M = {m:.6}"))
}

fn upper_bound_suite() -> Outcome {
    let b = 0.2;
    let v = PowerLawPotential::linear(b).unwrap();
    let mut worst = f64::INFINITY;
    let mut rows = 0;
    let mut failures = Vec::new();
    for n in 0..2u32 {
        let state = QuantumState::new(n, 0);
        let q1 = q_exact(1.0, state).unwrap();
        let q2 = q_exact(2.0, state).unwrap();
        for i in 0..=10 {
            let m = 0.1 * i as f64;
            let p = SseProblem::two_body(0.0, m, v.clone(), state).unwrap();
            let m_ref = sse_eigenvalue(&p).map_err(|e| format!("n={n} m={m}: {e}"))?;
            for qq in [q1, q2] {
                let afm = solve_afm(0.0, m, &v, qq).map_err(|e| e.to_string())?;
                let gap = afm.mass - m_ref;
                worst = worst.min(gap);
                if gap < -1e-4 || !afm.certified_upper_bound {
                    failures.push(format!("n={n} m={m:.1} Q={}: gap {gap:.3e}", qq.value()));
                }
            }
            rows += 1;
        }
    }
    check(
        failures.is_empty() && rows == 22,
        format!("{rows} rows, smallest gap {worst:.4e} {failures:?}"),
    )
}

fn closed_form_equivalence() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let m = rng.random_range(0.05..5.0);
        let (closed, numeric) = if i % 2 == 0 {
            let a = rng.random_range(0.1..2.0);
            let qq = q(a * rng.random_range(0.52..0.98));
            let v = PowerLawPotential::coulomb(a).unwrap();
            (coulomb_closed(m, a, qq), solve_afm(0.0, m, &v, qq))
        } else {
            let b = rng.random_range(0.05..2.0);
            let qq = q(rng.random_range(0.5..6.0));
            let v = PowerLawPotential::linear(b).unwrap();
            (linear_closed(m, b, qq), solve_afm(0.0, m, &v, qq))
        };
        let (c, s) = (closed.map_err(|e| e.to_string())?, numeric.map_err(|e| e.to_string())?);
        worst = worst.max(rel(s.mass, c.mass)).max(rel(s.r0, c.r0));
    }
    check(worst <= 1e-9, format!("max relative difference {worst:.2e} over 50 samples"))
}

fn asymptotic_crossing() -> Outcome {
    let (b, qq) = (0.2, q(1.5));
    let m0 = linear_symmetric_massless(2.0, b, qq).unwrap();
    let diff = |t: f64| {
        let m = t * m0;
        linear_ur_expansion(m, b, qq).unwrap() - linear_nr_expansion(m, b, qq).unwrap()
    };
    let t = bisect(diff, 0.05, 2.0, 0.0);
    let t_formula = expansion_crossing();
    let m = t * m0;
    let exact = linear_closed(m, b, qq).map_err(|e| e.to_string())?.mass;
    let e_ur = rel(linear_ur_expansion(m, b, qq).unwrap(), exact);
    let e_nr = rel(linear_nr_expansion(m, b, qq).unwrap(), exact);
    let ok = (t - 0.34).abs() <= 0.02
        && (t - t_formula).abs() < 1e-9
        && (e_ur - 0.055).abs() <= 0.01
        && (e_nr - 0.055).abs() <= 0.01;
    check(
        ok,
        format!("m/M0 = {t:.6}, errors {:.2}% / {:.2}%", 100.0 * e_ur, 100.0 * e_nr),
    )
}

fn q_oracle() -> Outcome {
    let mut cases = Vec::new();
    for p in [2.0, -1.0] {
        for n in 0..=3 {
            for l in 0..=3 {
                cases.push((p, QuantumState::new(n, l)));
            }
        }
    }
    for n in 0..=3 {
        cases.push((1.0, QuantumState::new(n, 0)));
    }
    let mut worst: f64 = 0.0;
    for (p, st) in &cases {
        let exact = q_exact(*p, *st).unwrap().value();
        let num = q_numeric(*p, *st).map_err(|e| format!("p={p} {st:?}: {e}"))?.value();
        worst = worst.max((num - exact).abs());
    }
    check(worst <= 1e-6, format!("{} states, max |dQ| = {worst:.2e}", cases.len()))
}

fn existence_window() -> Outcome {
    let v = PowerLawPotential::coulomb(1.2).unwrap();
    let binds = solve_afm(0.0, 1.0, &v, q(1.0)).is_ok();
    let unbound = matches!(solve_afm(0.0, 1.0, &v, q(2.0)), Err(AfmError::NoBoundState(_)));
    let collapse = [0.6, 0.5, 0.3, 0.1]
        .iter()
        .all(|&x| matches!(solve_afm(0.0, 1.0, &v, q(x)), Err(AfmError::CollapseDetected(_))));
    check(
        binds && unbound && collapse,
        format!("Q=1 binds: {binds}, Q=2 unbound: {unbound}, Q<=0.6 collapse: {collapse}"),
    )
}

fn residual_property() -> Outcome {
    let term = (0.01f64..2.0, prop_oneof![Just(-1.0), -0.9f64..-0.1, 0.2f64..3.0])
        .prop_map(|(alpha, lambda)| PowerTerm { alpha, lambda });
    let confining = (0.01f64..2.0, 0.2f64..3.0).prop_map(|(alpha, lambda)| PowerTerm { alpha, lambda });
    let strategy = (
        0.0f64..5.0,
        0.0f64..5.0,
        confining,
        prop::collection::vec(term, 0..3),
        0.5f64..6.0,
    );
    let config = Config {
        cases: 200,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let solved = std::cell::Cell::new(0u32);
    let result = runner.run(&strategy, |(m1, m2, conf, mut extra, qv)| {
        extra.push(conf);
        let v = PowerLawPotential::new(extra).unwrap();
        let qq = q(qv);
        match solve_afm(m1, m2, &v, qq) {
            Ok(sol) => {
                solved.set(solved.get() + 1);
                let r = residuals_two_body(&sol, m1, m2, &v, &qq);
                prop_assert!(r.max() < 1e-10, "residuals {r:?}");
                let (r1, r2) = rotation_radii(&sol);
                prop_assert!((r1 + r2 - sol.r0).abs() <= 2.0 * f64::EPSILON * sol.r0);
            }
            Err(AfmError::CollapseDetected(_)) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
        Ok(())
    });
    match result {
        Ok(()) => {
            let solved = solved.get();
            check(solved >= 150, format!("200 configurations, {solved} bound"))
        }
        Err(e) => Err(e.to_string()),
    }
}

fn symmetric_reduction() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let (got, want) = if i % 2 == 0 {
            let m = rng.random_range(0.1..5.0);
            let a = rng.random_range(0.1..2.0);
            let qq = q(a / 2.0 * rng.random_range(1.05..3.0));
            let v = PowerLawPotential::coulomb(a).unwrap();
            (solve_afm(m, m, &v, qq), coulomb_symmetric(2.0, m, a, qq))
        } else {
            let b = rng.random_range(0.05..2.0);
            let qq = q(rng.random_range(0.5..6.0));
            let v = PowerLawPotential::linear(b).unwrap();
            (solve_afm(0.0, 0.0, &v, qq), linear_symmetric_massless(2.0, b, qq))
        };
        let got = got.map_err(|e| e.to_string())?.mass;
        let want = want.map_err(|e| e.to_string())?;
        worst = worst.max(rel(got, want));
    }
    check(worst <= 1e-9, format!("max relative difference {worst:.2e} over 20 configurations"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("coulomb AFM value", coulomb_afm_value, Duration::from_secs(1)),
        ("coulomb reference value", coulomb_reference_value, Duration::from_secs(120)),
        ("linear upper-bound suite", upper_bound_suite, Duration::from_secs(600)),
        ("closed-form equivalence", closed_form_equivalence, Duration::from_secs(5)),
        ("asymptotic crossing", asymptotic_crossing, Duration::from_secs(1)),
        ("Q oracle", q_oracle, Duration::from_secs(60)),
        ("existence window", existence_window, Duration::from_secs(1)),
        ("residual property", residual_property, Duration::from_secs(10)),
        ("symmetric reduction", symmetric_reduction, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(d) if elapsed <= *limit => (true, d),
            Ok(d) => (false, format!("{d}; took {elapsed:.2?}, limit {limit:?}")),
            Err(d) => (false, d),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {}: {} [{name}] {detail} ({elapsed:.2?})",
            i + 1,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
