//! Reference eigensolver for the spinless Salpeter equation.
//!
//! The radial problem is discretised on the hard-wall grid of
//! [`SpectralGrid`]: the kinetic operator is a function of the exact sine-basis
//! `p²` matrix, the potential is diagonal at the grid points. A Coulomb term
//! makes the wavefunction behave as `r^β` at the origin with `β < 1`, which
//! slows convergence to `N^(−2β)`; those runs are Richardson-extrapolated with
//! the exponent predicted from `β`.

use faer::{Mat, Side};
use serde::{Deserialize, Serialize};

use crate::afm::solve_with;
use crate::error::{AfmError, Result};
use crate::extrapolate::richardson;
use crate::grid::SpectralGrid;
use crate::kinematics::Kinematics;
use crate::potential::PowerLawPotential;
use crate::quantum::{GlobalQ, QuantumState};

pub const SSE_TOLERANCE: f64 = 5e-4;
pub const DEFAULT_POINTS: usize = 600;
/// Box radius in units of the AFM mean radius.
pub const BOX_FACTOR: f64 = 12.0;
const MAX_DOUBLINGS: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SseProblem {
    pub kinematics: Kinematics,
    pub potential: PowerLawPotential,
    pub state: QuantumState,
    /// Starting grid; when absent the box is sized from the AFM radius and the
    /// grid starts at [`DEFAULT_POINTS`].
    pub grid: Option<SpectralGrid>,
}

impl SseProblem {
    pub fn two_body(m1: f64, m2: f64, potential: PowerLawPotential, state: QuantumState) -> Result<Self> {
        Ok(Self {
            kinematics: Kinematics::two_body(m1, m2)?,
            potential,
            state,
            grid: None,
        })
    }

    pub fn symmetric(sigma: f64, m: f64, potential: PowerLawPotential, state: QuantumState) -> Result<Self> {
        Ok(Self {
            kinematics: Kinematics::symmetric(sigma, m)?,
            potential,
            state,
            grid: None,
        })
    }

    pub fn with_grid(mut self, grid: SpectralGrid) -> Self {
        self.grid = Some(grid);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SseSolution {
    pub mass: f64,
    /// Estimated absolute discretisation error of `mass`.
    pub error_estimate: f64,
    /// `(N, M(N))` for every grid that was diagonalised.
    pub levels: Vec<(usize, f64)>,
    pub box_radius: f64,
    pub extrapolated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundGap {
    pub q: GlobalQ,
    pub m_afm: f64,
    pub m_ref: f64,
    /// `m_afm − m_ref`; non-negative up to discretisation error when certified.
    pub gap: f64,
    pub certified: bool,
}

/// `Σ_k f(k_k)·S_ik·S_kj` for the sine transform `S` of `grid`, using
/// `S_ik·S_kj = [cos(πk(i−j)/(N+1)) − cos(πk(i+j)/(N+1))]/(N+1)`.
fn sine_function_matrix(grid: &SpectralGrid, f: impl Fn(f64) -> f64) -> Mat<f64> {
    let n = grid.points();
    let n1 = n + 1;
    let period = 2 * n1;
    let cos_table: Vec<f64> = (0..period)
        .map(|k| (std::f64::consts::PI * k as f64 / n1 as f64).cos())
        .collect();
    let fk: Vec<f64> = (0..n).map(|j| f(grid.wavenumber(j))).collect();
    let c: Vec<f64> = (0..=2 * n1)
        .map(|m| {
            fk.iter()
                .enumerate()
                .map(|(j, v)| v * cos_table[((j + 1) * m) % period])
                .sum::<f64>()
                / n1 as f64
        })
        .collect();
    Mat::from_fn(n, n, |i, j| c[i.abs_diff(j)] - c[i + j + 2])
}

/// Partial-wave `p²` on the grid: exact sine-basis second derivative plus the
/// diagonal `l(l+1)/r²`.
pub fn p2_matrix(l: u32, grid: &SpectralGrid) -> Mat<f64> {
    let mut m = sine_function_matrix(grid, |k| k * k);
    if l > 0 {
        let c = (l * (l + 1)) as f64;
        for i in 0..grid.points() {
            let r = grid.radius(i);
            m[(i, i)] += c / (r * r);
        }
    }
    m
}

/// `f(A)` for a symmetric matrix `A` via its eigendecomposition.
pub fn operator_function(a: &Mat<f64>, f: impl Fn(f64) -> f64) -> Result<Mat<f64>> {
    let eig = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| AfmError::LinearAlgebra(format!("{e:?}")))?;
    let u = eig.U();
    let s = eig.S().column_vector();
    let n = a.nrows();
    let scaled = Mat::from_fn(n, n, |i, j| u[(i, j)] * f(s[j]));
    Ok(&scaled * u.transpose())
}

/// `√(P2 + m²)`, with negative rounding noise in the spectrum clipped.
pub fn operator_sqrt(p2: &Mat<f64>, m: f64) -> Result<Mat<f64>> {
    operator_function(p2, |lambda| (lambda.max(0.0) + m * m).sqrt())
}

/// Kinetic matrix `Σ_i w_i·√(p² + m_i²)` in the `l` partial wave.
pub fn kinetic_matrix(kin: &Kinematics, l: u32, grid: &SpectralGrid) -> Result<Mat<f64>> {
    if l == 0 {
        // p² is diagonal in the sine basis, so any function of it is too
        return Ok(sine_function_matrix(grid, |k| kin.energy(k)));
    }
    let p2 = p2_matrix(l, grid);
    operator_function(&p2, |lambda| kin.energy(lambda.max(0.0).sqrt()))
}

/// Full discretised Hamiltonian, symmetric by construction.
pub fn hamiltonian_matrix(
    kin: &Kinematics,
    v: &PowerLawPotential,
    l: u32,
    grid: &SpectralGrid,
) -> Result<Mat<f64>> {
    let mut h = kinetic_matrix(kin, l, grid)?;
    for i in 0..grid.points() {
        h[(i, i)] += v.value(grid.radius(i));
    }
    Ok(h)
}

/// Eigenvalue `n` of the discretised Hamiltonian on one grid.
pub fn level_mass(problem: &SseProblem, grid: &SpectralGrid) -> Result<f64> {
    let h = hamiltonian_matrix(&problem.kinematics, &problem.potential, problem.state.l, grid)?;
    let vals = h
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| AfmError::LinearAlgebra(format!("{e:?}")))?;
    vals.get(problem.state.n as usize).copied().ok_or_else(|| {
        AfmError::DomainError(format!("grid too small for radial excitation {}", problem.state.n))
    })
}

fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Strength `w·K_l(a)` felt by `r^(−a)·Y_lm` under `w·|p|`, per unit `w`:
/// `|p| r^(−a) Y = K_l(a)·r^(−a−1) Y`.
fn herbst_k(l: f64, a: f64) -> f64 {
    2.0 * (ln_gamma((l + 3.0 - a) / 2.0) + ln_gamma((l + a + 1.0) / 2.0)
        - ln_gamma((l + a) / 2.0)
        - ln_gamma((l + 2.0 - a) / 2.0))
        .exp()
}

/// Largest Coulomb strength per unit kinetic weight for which `|p| − α/r` is
/// bounded below in partial wave `l`; `2/π` for `l = 0`.
pub fn critical_coupling(l: u32) -> f64 {
    herbst_k(l as f64, 1.0)
}

/// Exponent `β` of `u(r) ~ r^β` at the origin for `|p| − α/r` in partial wave
/// `l`, from `K_l(1 − β) = α`. Free motion gives `β = l + 1`.
pub fn coulomb_short_distance_exponent(alpha: f64, l: u32) -> Result<f64> {
    let crit = critical_coupling(l);
    if !(alpha >= 0.0 && alpha < crit) {
        return Err(AfmError::CollapseDetected(format!(
            "Coulomb strength {alpha} per kinetic weight reaches the critical value {crit}"
        )));
    }
    if alpha == 0.0 {
        return Ok(l as f64 + 1.0);
    }
    let lf = l as f64;
    // K_l increases from 0 at a = −l to the critical value at a = 1
    let a = crate::roots::bisect(|a| herbst_k(lf, a) - alpha, -lf + 1e-15, 1.0 - 1e-15, 0.0);
    Ok(1.0 - a)
}

/// Box radius from the AFM mean radius: `Q₂` first, then `Q₋₁`, then a
/// length built from the couplings and masses.
pub fn default_box_radius(problem: &SseProblem) -> f64 {
    let st = problem.state;
    let candidates = [
        2.0 * st.n as f64 + st.l as f64 + 1.5,
        (st.n + st.l + 1) as f64,
    ];
    for q in candidates {
        let Ok(q) = GlobalQ::supplied(q, None) else { continue };
        if let Ok(sol) = solve_with(&problem.kinematics, &problem.potential, q) {
            return BOX_FACTOR * sol.r0;
        }
    }
    let q = candidates[0];
    let mut scale: f64 = 0.0;
    for t in problem.potential.active_terms() {
        if t.lambda != -1.0 {
            scale = scale.max((q / t.alpha).powf(1.0 / (t.lambda + 1.0)));
        } else {
            scale = scale.max(q * q / t.alpha.max(1e-12) / problem.kinematics.max_mass().max(1e-12));
        }
    }
    BOX_FACTOR * if scale > 0.0 && scale.is_finite() { scale } else { q }
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Solve the `(n, l)` level, with the convergence record.
pub fn sse_solve(problem: &SseProblem) -> Result<SseSolution> {
    problem.kinematics.validate()?;
    let v = &problem.potential;
    if !v.has_active_term() {
        return Err(AfmError::InvalidPotential(
            "potential needs at least one term with non-zero coupling".into(),
        ));
    }
    let start = match problem.grid {
        Some(g) => g,
        None => SpectralGrid::new(default_box_radius(problem), DEFAULT_POINTS)?,
    };
    let coulomb = v.coulomb_strength();
    let beta = if coulomb > 0.0 {
        let alpha = coulomb / problem.kinematics.ultrarelativistic_weight();
        Some(coulomb_short_distance_exponent(alpha, problem.state.l)?)
    } else {
        None
    };

    let mut grids = vec![start];
    let mut levels = vec![(start.points(), level_mass(problem, &start)?)];
    let (mass, error_estimate, extrapolated) = match beta {
        Some(beta) => {
            for _ in 0..MAX_DOUBLINGS {
                let g = grids.last().unwrap().doubled();
                levels.push((g.points(), level_mass(problem, &g)?));
                grids.push(g);
            }
            let s = 2.0 * beta;
            let second = if s >= 1.0 { s + 1.0 } else { 1.0 };
            let best = richardson(&levels, &[s, second])?;
            let alt = richardson(&levels, &[s, 2.0 * s])?;
            (best, (best - alt).abs(), true)
        }
        None => {
            let mut done = None;
            for _ in 0..MAX_DOUBLINGS {
                let g = grids.last().unwrap().doubled();
                let m = level_mass(problem, &g)?;
                let prev = levels.last().unwrap().1;
                levels.push((g.points(), m));
                grids.push(g);
                if relative(prev, m) < SSE_TOLERANCE {
                    done = Some((m, (m - prev).abs()));
                    break;
                }
            }
            match done {
                Some((m, err)) => (m, err, false),
                None => {
                    return Err(AfmError::ConvergenceFailure(format!(
                        "reference levels {levels:?} did not settle to {SSE_TOLERANCE}"
                    )))
                }
            }
        }
    };
    if error_estimate > SSE_TOLERANCE * mass.abs() {
        return Err(AfmError::ConvergenceFailure(format!(
            "reference mass {mass} has error estimate {error_estimate} (levels {levels:?})"
        )));
    }
    if !v.is_confining() && mass >= problem.kinematics.rest_energy() {
        return Err(AfmError::NoBoundState(format!(
            "reference mass {mass} is not below the threshold {}",
            problem.kinematics.rest_energy()
        )));
    }
    Ok(SseSolution {
        mass,
        error_estimate,
        levels,
        box_radius: start.box_radius(),
        extrapolated,
    })
}

/// Reference mass of the requested level.
pub fn sse_eigenvalue(problem: &SseProblem) -> Result<f64> {
    sse_solve(problem).map(|s| s.mass)
}

/// AFM mass minus reference mass for each `Q`.
pub fn bound_gap(problem: &SseProblem, q_choices: &[GlobalQ]) -> Result<Vec<BoundGap>> {
    let m_ref = sse_eigenvalue(problem)?;
    q_choices
        .iter()
        .map(|&q| {
            let afm = solve_with(&problem.kinematics, &problem.potential, q)?;
            Ok(BoundGap {
                q,
                m_afm: afm.mass,
                m_ref,
                gap: afm.mass - m_ref,
                certified: afm.certified_upper_bound,
            })
        })
        .collect()
}
