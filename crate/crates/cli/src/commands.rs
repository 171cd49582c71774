use rayon::prelude::*;

use salpeter_afm::afm::closed_form::{
    coulomb_closed, linear_closed, linear_nr_expansion, linear_ur_expansion,
};
use salpeter_afm::afm::{residuals, solve_with, AfmSolution};
use salpeter_afm::error::AfmError;
use salpeter_afm::grid::SpectralGrid;
use salpeter_afm::kinematics::Kinematics;
use salpeter_afm::potential::PowerLawPotential;
use salpeter_afm::q::{q_exact, q_numeric};
use salpeter_afm::quantum::{GlobalQ, QuantumState};
use salpeter_afm::sse::{bound_gap, default_box_radius, sse_solve, SseProblem, DEFAULT_POINTS};

use crate::config::{q_for_exponent, QtableConfig, RunConfig, ScanVariable};
use crate::table::{Cell, Table};
use crate::{error_kind, CliError};

/// Command-line grid overrides; they win over the config file.
#[derive(Debug, Clone, Copy, Default)]
pub struct GridOverride {
    pub points: Option<usize>,
    pub box_radius: Option<f64>,
}

impl GridOverride {
    pub fn merged(self, cfg: &RunConfig) -> Self {
        Self {
            points: self.points.or(cfg.grid_points()),
            box_radius: self.box_radius.or(cfg.box_radius()),
        }
    }

    fn apply(self, problem: SseProblem) -> Result<SseProblem, CliError> {
        if self.points.is_none() && self.box_radius.is_none() {
            return Ok(problem);
        }
        let r = self.box_radius.unwrap_or_else(|| default_box_radius(&problem));
        let grid = SpectralGrid::new(r, self.points.unwrap_or(DEFAULT_POINTS))
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(problem.with_grid(grid))
    }
}

fn require_q(cfg: &RunConfig, state: QuantumState) -> Result<GlobalQ, CliError> {
    cfg.global_q(state)?
        .ok_or_else(|| CliError::Config("set `q` or `auxiliary_exponent`".into()))
}

/// Mass of the partner when a two-body system has a massless particle.
fn massless_partner(kin: &Kinematics) -> Option<f64> {
    match *kin {
        Kinematics::TwoBody { m1, m2 } if m1.min(m2) == 0.0 => Some(m1.max(m2)),
        _ => None,
    }
}

/// Slope `b` when the potential is a single linear term.
fn pure_linear(v: &PowerLawPotential) -> Option<f64> {
    let mut terms = v.active_terms();
    match (terms.next(), terms.next()) {
        (Some(t), None) if t.lambda == 1.0 => Some(t.alpha),
        _ => None,
    }
}

/// Spell out the Coulomb existence window for binding failures.
fn explain(e: AfmError, kin: &Kinematics, v: &PowerLawPotential, q: GlobalQ) -> CliError {
    if !e.is_binding_failure() || !v.is_pure_coulomb() {
        return CliError::Afm(e);
    }
    let a = v.coulomb_strength();
    let qv = q.value();
    let lower = a / kin.ultrarelativistic_weight();
    let upper = massless_partner(kin).filter(|&m| m > 0.0).map(|_| a);
    let window = match upper {
        Some(u) => format!("a bound state needs {lower} < Q < {u} (a/2 < Q < a)"),
        None => format!("a bound state needs Q > {lower}"),
    };
    let why = match &e {
        AfmError::NoBoundState(_) if upper.is_some_and(|u| qv >= u) => {
            format!("no binding: Q ≥ a (Q = {qv}, a = {a})")
        }
        AfmError::CollapseDetected(_) if qv <= lower => {
            format!("collapse: the Coulomb attraction overwhelms the kinetic energy (Q = {qv} ≤ {lower})")
        }
        _ => format!("Q = {qv}, a = {a}"),
    };
    CliError::Window {
        error: e,
        explanation: format!("{why}; {window}"),
    }
}

/// Independent closed-form value where one exists.
fn closed_form_mass(kin: &Kinematics, v: &PowerLawPotential, q: GlobalQ) -> Option<f64> {
    let m = massless_partner(kin)?;
    if v.is_pure_coulomb() && m > 0.0 {
        coulomb_closed(m, v.coulomb_strength(), q).ok().map(|s| s.mass)
    } else {
        pure_linear(v).and_then(|b| linear_closed(m, b, q).ok().map(|s| s.mass))
    }
}

fn solution_fields(sol: &AfmSolution) -> Vec<(&'static str, Cell)> {
    vec![
        ("M", sol.mass.into()),
        ("r0", sol.r0.into()),
        ("p0", sol.p0.into()),
        ("nu1", sol.nu1.into()),
        ("nu2", sol.nu2.into()),
        ("Q", sol.q.value().into()),
        ("Q_source", sol.q.source().tag().into()),
        ("certified", sol.certified_upper_bound.into()),
    ]
}

pub fn cmd_bound(cfg: &RunConfig) -> Result<Table, CliError> {
    let kin = cfg.kinematics()?;
    let v = cfg.potential()?;
    let q = require_q(cfg, cfg.state())?;
    let sol = solve_with(&kin, &v, q).map_err(|e| explain(e, &kin, &v, q))?;
    let res = residuals(&sol, &kin, &v, &q);
    let mut fields = solution_fields(&sol);
    fields.extend([
        ("residual_mass", res.mass.into()),
        ("residual_momentum", res.momentum.into()),
        ("residual_virial", res.virial.into()),
        ("M_closed_form", closed_form_mass(&kin, &v, q).into()),
    ]);
    Ok(Table::record(fields))
}

pub fn cmd_reference(cfg: &RunConfig, grid: GridOverride) -> Result<Table, CliError> {
    let kin = cfg.kinematics()?;
    let v = cfg.potential()?;
    let state = cfg.state();
    let problem = grid.merged(cfg).apply(SseProblem {
        kinematics: kin,
        potential: v,
        state,
        grid: None,
    })?;
    let q = cfg.global_q(state)?;
    let sol = sse_solve(&problem)?;
    let levels: Vec<String> = sol
        .levels
        .iter()
        .map(|(n, m)| format!("{n}:{}", crate::table::fmt_g(*m)))
        .collect();
    let mut fields: Vec<(&str, Cell)> = vec![
        ("M_ref", sol.mass.into()),
        ("error_estimate", sol.error_estimate.into()),
        ("extrapolated", sol.extrapolated.into()),
        ("box_radius", sol.box_radius.into()),
        ("levels", levels.join(" ").into()),
    ];
    if let Some(q) = q {
        let gap = bound_gap(&problem, &[q])?.remove(0);
        fields.extend([
            ("Q", q.value().into()),
            ("M_afm", gap.m_afm.into()),
            ("gap", gap.gap.into()),
            ("certified", gap.certified.into()),
        ]);
    }
    Ok(Table::record(fields))
}

struct Status(Vec<String>);

impl Status {
    fn take<T>(&mut self, column: &str, r: Result<T, AfmError>) -> Option<T> {
        r.map_err(|e| self.0.push(format!("{column}:{}", error_kind(&e)))).ok()
    }

    fn cell(self) -> Cell {
        if self.0.is_empty() {
            "ok".into()
        } else {
            self.0.join(";").into()
        }
    }
}

pub const MASS_SCAN_COLUMNS: [&str; 9] =
    ["m", "n", "l", "M_afm_Q1", "M_afm_Q2", "M_ref", "M_ur", "M_nr", "status"];
pub const Q_SCAN_COLUMNS: [&str; 7] = ["Q", "M", "r0", "p0", "M_over_m", "r0_m_over_a", "status"];

pub fn cmd_scan(cfg: &RunConfig, grid: GridOverride) -> Result<Table, CliError> {
    let scan = cfg
        .scan
        .as_ref()
        .ok_or_else(|| CliError::Config("scan mode needs a `scan` section".into()))?;
    let points = scan.points()?;
    let v = cfg.potential()?;
    match scan.variable {
        ScanVariable::M => mass_scan(cfg, &v, &points, scan.reference.unwrap_or(true), grid.merged(cfg)),
        ScanVariable::Q => q_scan(cfg, &v, &points),
    }
}

fn mass_scan(
    cfg: &RunConfig,
    v: &PowerLawPotential,
    points: &[f64],
    reference: bool,
    grid: GridOverride,
) -> Result<Table, CliError> {
    let states = cfg.states();
    let mut jobs = Vec::new();
    for &state in &states {
        let q1 = q_for_exponent(1.0, state);
        let q2 = q_exact(2.0, state).map_err(CliError::Afm)?;
        for &m in points {
            // validate every row's kinematics before any work starts
            let kin = cfg.kinematics_with(Some(m))?;
            jobs.push((m, state, kin, q1.as_ref().ok().copied(), q2));
        }
    }
    let b = pure_linear(v);
    let rows: Vec<Vec<Cell>> = jobs
        .par_iter()
        .map(|&(m, state, kin, q1, q2)| {
            let mut status = Status(Vec::new());
            let afm1 = match q1 {
                Some(q1) => status.take("M_afm_Q1", solve_with(&kin, v, q1).map(|s| s.mass)),
                None => status.take::<f64>("M_afm_Q1", Err(AfmError::UnsupportedCase { p: 1.0, n: state.n, l: state.l })),
            };
            let afm2 = status.take("M_afm_Q2", solve_with(&kin, v, q2).map(|s| s.mass));
            let m_ref = if reference {
                let problem = SseProblem {
                    kinematics: kin,
                    potential: v.clone(),
                    state,
                    grid: None,
                };
                grid.apply(problem)
                    .ok()
                    .and_then(|p| status.take("M_ref", sse_solve(&p).map(|s| s.mass)))
            } else {
                None
            };
            let (ur, nr) = match (b, q1, massless_partner(&kin)) {
                (Some(b), Some(q1), Some(mass)) => (
                    linear_ur_expansion(mass, b, q1).ok(),
                    linear_nr_expansion(mass, b, q1).ok(),
                ),
                _ => (None, None),
            };
            vec![
                m.into(),
                state.n.into(),
                state.l.into(),
                afm1.into(),
                afm2.into(),
                m_ref.into(),
                ur.into(),
                nr.into(),
                status.cell(),
            ]
        })
        .collect();
    let mut table = Table::new(&MASS_SCAN_COLUMNS);
    table.rows = rows;
    Ok(table)
}

fn q_scan(cfg: &RunConfig, v: &PowerLawPotential, points: &[f64]) -> Result<Table, CliError> {
    let kin = cfg.kinematics()?;
    let a = v.coulomb_strength();
    let m = kin.max_mass();
    let mut qs = Vec::with_capacity(points.len());
    for &x in points {
        qs.push(GlobalQ::supplied(x, cfg.auxiliary_exponent).map_err(|e| CliError::Config(e.to_string()))?);
    }
    let rows: Vec<Vec<Cell>> = qs
        .par_iter()
        .map(|&q| {
            let mut status = Status(Vec::new());
            let sol = status.take("M", solve_with(&kin, v, q));
            let scaled = |x: Option<f64>| x.filter(|_| m > 0.0);
            vec![
                q.value().into(),
                sol.as_ref().map(|s| s.mass).into(),
                sol.as_ref().map(|s| s.r0).into(),
                sol.as_ref().map(|s| s.p0).into(),
                scaled(sol.as_ref().map(|s| s.mass / m)).into(),
                scaled(sol.as_ref().filter(|_| a > 0.0).map(|s| s.r0 * m / a)).into(),
                status.cell(),
            ]
        })
        .collect();
    let mut table = Table::new(&Q_SCAN_COLUMNS);
    table.rows = rows;
    Ok(table)
}

pub fn cmd_qtable(cfg: &RunConfig) -> Result<Table, CliError> {
    let spec = cfg.qtable.clone().unwrap_or_default();
    let QtableConfig { exponents, states } = spec;
    for &p in &exponents {
        if !(p.is_finite() && p > -2.0 && p != 0.0) {
            return Err(CliError::Config(format!(
                "auxiliary exponents must satisfy p > -2 and p != 0, got {p}"
            )));
        }
    }
    let jobs: Vec<(f64, QuantumState)> = exponents
        .iter()
        .flat_map(|&p| states.iter().map(move |&s| (p, s)))
        .collect();
    let rows: Vec<Vec<Cell>> = jobs
        .par_iter()
        .map(|&(p, st)| {
            let exact = q_exact(p, st).ok();
            let mut status = Status(Vec::new());
            let numeric = status.take("Q_numeric", q_numeric(p, st).map(|q| q.value()));
            let diff = exact.zip(numeric).map(|(e, n)| (e.value() - n).abs());
            let source = exact.map_or_else(|| format!("numeric({p})"), |q| q.source().tag());
            vec![
                p.into(),
                st.n.into(),
                st.l.into(),
                exact.map(|q| q.value()).into(),
                numeric.into(),
                diff.into(),
                source.into(),
                status.cell(),
            ]
        })
        .collect();
    let mut table = Table::new(&["p", "n", "l", "Q_exact", "Q_numeric", "abs_diff", "source", "status"]);
    table.rows = rows;
    Ok(table)
}
