//! Radial Schrödinger eigensolver for `p²/(2μ) + ρ·sgn(p)·r^p`.
//!
//! The Hamiltonian is projected exactly onto the hard-wall sine basis
//! (kinetic energy diagonal, potential and centrifugal terms from
//! [`crate::galerkin`]), so eigenvalues are variational at every `N`. The
//! leading discretisation error for a cusp at the origin goes as `N⁻³`, so
//! slowly converging levels are Richardson-extrapolated.

use faer::{Mat, Side};
use serde::{Deserialize, Serialize};

use crate::afm::AfmSolution;
use crate::error::{AfmError, Result};
use crate::extrapolate::richardson;
use crate::galerkin::power_matrix;
use crate::grid::SpectralGrid;
use crate::potential::PowerLawPotential;
use crate::quantum::QuantumState;

/// Relative change under grid doubling accepted as converged.
pub const NR_TOLERANCE: f64 = 1e-7;
const FIT_EXPONENTS: [f64; 3] = [3.0, 4.0, 5.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialEigenpair {
    pub energy: f64,
    /// Reduced radial wavefunction `u(r_i)` on `grid`, with `Σu²·Δr = 1` and
    /// positive slope at the origin.
    pub amplitudes: Vec<f64>,
    pub grid: SpectralGrid,
}

impl RadialEigenpair {
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|u| u * u).sum::<f64>() * self.grid.spacing()
    }

    /// Interior sign changes, ignoring the numerically zero tail.
    pub fn node_count(&self) -> usize {
        let peak = self.amplitudes.iter().fold(0.0f64, |a, u| a.max(u.abs()));
        let floor = 1e-6 * peak;
        let mut last = 0.0f64;
        let mut nodes = 0;
        for &u in &self.amplitudes {
            if u.abs() < floor {
                continue;
            }
            if last != 0.0 && (u > 0.0) != (last > 0.0) {
                nodes += 1;
            }
            last = u;
        }
        nodes
    }

    /// Probability carried by the outer tenth of the box.
    pub fn tail_weight(&self) -> f64 {
        let n = self.amplitudes.len();
        let start = n - n / 10;
        self.amplitudes[start..].iter().map(|u| u * u).sum::<f64>() * self.grid.spacing()
    }

    /// Basis coefficients `c_j` behind the samples.
    pub fn coefficients(&self) -> Vec<f64> {
        let s = self.grid.sine_transform();
        let scale = self.grid.spacing().sqrt();
        let n = self.amplitudes.len();
        (0..n)
            .map(|j| scale * (0..n).map(|i| s[(j, i)] * self.amplitudes[i]).sum::<f64>())
            .collect()
    }

    /// `⟨r^p⟩` from the exact basis matrix elements.
    pub fn power_expectation(&self, p: f64) -> f64 {
        let c = self.coefficients();
        let w = power_matrix(&self.grid, p);
        let n = c.len();
        (0..n)
            .map(|i| c[i] * (0..n).map(|j| w[(i, j)] * c[j]).sum::<f64>())
            .sum()
    }

    /// `⟨p²/(2μ) + l(l+1)/(2μr²)⟩` in the basis.
    pub fn kinetic_expectation(&self, mu: f64, l: u32) -> f64 {
        let c = self.coefficients();
        let radial: f64 = c
            .iter()
            .enumerate()
            .map(|(j, cj)| cj * cj * self.grid.wavenumber(j).powi(2))
            .sum();
        let centrifugal = if l > 0 {
            (l * (l + 1)) as f64 * self.power_expectation(-2.0)
        } else {
            0.0
        };
        (radial + centrifugal) / (2.0 * mu)
    }

    /// `⟨f(r)⟩` by the grid rule.
    pub fn expectation(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, u)| u * u * f(self.grid.radius(i)))
            .sum::<f64>()
            * self.grid.spacing()
    }
}

fn validate(mu: f64, rho: f64, p: f64) -> Result<()> {
    if !(mu.is_finite() && mu > 0.0 && rho.is_finite() && rho > 0.0) {
        return Err(AfmError::DomainError(format!(
            "mu and rho must be positive, got mu = {mu}, rho = {rho}"
        )));
    }
    if !(p.is_finite() && p > -2.0 && p != 0.0) {
        return Err(AfmError::DomainError(format!(
            "exponent must satisfy p > -2 and p != 0, got {p}"
        )));
    }
    Ok(())
}

/// Galerkin matrix of the radial Hamiltonian in the sine basis of `grid`.
pub fn nr_hamiltonian(mu: f64, rho: f64, p: f64, l: u32, grid: &SpectralGrid) -> Mat<f64> {
    let mut h = power_matrix(grid, p);
    let sign = p.signum();
    let n = grid.points();
    for j in 0..n {
        for i in 0..n {
            h[(i, j)] *= sign * rho;
        }
        let k = grid.wavenumber(j);
        h[(j, j)] += k * k / (2.0 * mu);
    }
    if l > 0 {
        let c = (l * (l + 1)) as f64 / (2.0 * mu);
        let w = power_matrix(grid, -2.0);
        for j in 0..n {
            for i in 0..n {
                h[(i, j)] += c * w[(i, j)];
            }
        }
    }
    h
}

fn level_energy(h: &Mat<f64>, n: u32) -> Result<f64> {
    let vals = h
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| AfmError::LinearAlgebra(format!("{e:?}")))?;
    vals.get(n as usize).copied().ok_or_else(|| {
        AfmError::DomainError(format!("grid too small for radial excitation {n}"))
    })
}

fn level_pair(h: &Mat<f64>, n: u32, grid: &SpectralGrid) -> Result<(f64, Vec<f64>)> {
    let eig = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| AfmError::LinearAlgebra(format!("{e:?}")))?;
    let idx = n as usize;
    if idx >= grid.points() {
        return Err(AfmError::DomainError(format!(
            "grid too small for radial excitation {n}"
        )));
    }
    let energy = eig.S().column_vector()[idx];
    let u = eig.U();
    let c: Vec<f64> = (0..grid.points()).map(|j| u[(j, idx)]).collect();
    let mut amplitudes = grid.samples_from_coefficients(&c);
    if amplitudes.iter().find(|a| a.abs() > 0.0).is_some_and(|&a| a < 0.0) {
        amplitudes.iter_mut().for_each(|a| *a = -*a);
    }
    Ok((energy, amplitudes))
}

fn rel_change(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// The `(n, l)` eigenpair of `p²/(2μ) + l(l+1)/(2μr²) + ρ·sgn(p)·r^p` in the
/// box of `grid`, starting at `grid.points()` and doubling up to three times.
///
/// Stops as soon as two successive levels agree to [`NR_TOLERANCE`].
/// Otherwise the four levels are extrapolated with exponents 3, 4, 5 and the
/// spread against the 3, 4 fit of the last three levels is the error estimate.
pub fn nr_eigenvalue(
    mu: f64,
    rho: f64,
    p: f64,
    state: QuantumState,
    grid: SpectralGrid,
) -> Result<RadialEigenpair> {
    validate(mu, rho, p)?;
    let energy_at = |g: &SpectralGrid| level_energy(&nr_hamiltonian(mu, rho, p, state.l, g), state.n);
    let mut grids = vec![grid];
    let mut levels = vec![energy_at(&grid)?];
    let mut energy = None;
    for _ in 0..3 {
        let g = grids.last().unwrap().doubled();
        let e = energy_at(&g)?;
        let prev = *levels.last().unwrap();
        grids.push(g);
        levels.push(e);
        if rel_change(prev, e) < NR_TOLERANCE {
            energy = Some(e);
            break;
        }
    }
    let energy = match energy {
        Some(e) => e,
        None => {
            let samples: Vec<(usize, f64)> =
                grids.iter().map(|g| g.points()).zip(levels.iter().copied()).collect();
            let full = richardson(&samples, &FIT_EXPONENTS)?;
            let tail = richardson(&samples[1..], &FIT_EXPONENTS[..2])?;
            if rel_change(tail, full) > NR_TOLERANCE {
                return Err(AfmError::ConvergenceFailure(format!(
                    "(n, l) = ({}, {}): levels {levels:?} extrapolate to {full} vs {tail}",
                    state.n, state.l
                )));
            }
            full
        }
    };
    if p < 0.0 && energy >= 0.0 {
        return Err(AfmError::DomainError(format!(
            "(n, l) = ({}, {}) is not bound in a box of radius {}",
            state.n,
            state.l,
            grid.box_radius()
        )));
    }
    let finest = *grids.last().unwrap();
    let (_, amplitudes) = level_pair(&nr_hamiltonian(mu, rho, p, state.l, &finest), state.n, &finest)?;
    Ok(RadialEigenpair {
        energy,
        amplitudes,
        grid: finest,
    })
}

/// Radius where `∫ κ dr` past the turning point reaches `decay`, with
/// `κ = √(2μ(ρ·sgn(p)·r^p − ε))`.
fn decay_radius(mu: f64, rho: f64, p: f64, l: u32, energy: f64, decay: f64) -> f64 {
    let v = |r: f64| rho * p.signum() * r.powf(p) + (l * (l + 1)) as f64 / (2.0 * mu * r * r);
    let kappa = |r: f64| (2.0 * mu * (v(r) - energy)).max(0.0).sqrt();
    // outer turning point
    let mut r = if p > 0.0 {
        (energy.abs() / rho).powf(1.0 / p)
    } else {
        (rho / energy.abs()).powf(-1.0 / p)
    };
    r = r.max(1e-12);
    for _ in 0..10_000 {
        if v(r) >= energy {
            break;
        }
        r *= 1.01;
    }
    let step = 0.01 * r;
    let mut acc = 0.0;
    for _ in 0..1_000_000 {
        if acc >= decay {
            break;
        }
        acc += kappa(r + 0.5 * step) * step;
        r += step;
    }
    r
}

/// Box radius for the `(n, l)` state given an energy estimate: the
/// wavefunction decays by about `e^−14` in amplitude before the wall.
pub fn box_radius_for(mu: f64, rho: f64, p: f64, state: QuantumState, energy: f64) -> f64 {
    decay_radius(mu, rho, p, state.l, energy, 14.0)
}

/// Solve with an automatically sized box: the box follows the computed energy
/// and grows until the outer tenth of it carries less than `1e-10`.
pub fn nr_eigenvalue_auto(
    mu: f64,
    rho: f64,
    p: f64,
    state: QuantumState,
    points: usize,
    energy_guess: f64,
) -> Result<RadialEigenpair> {
    validate(mu, rho, p)?;
    let mut radius = box_radius_for(mu, rho, p, state, energy_guess);
    let mut last = None;
    for _ in 0..6 {
        let pair = nr_eigenvalue(mu, rho, p, state, SpectralGrid::new(radius, points)?)?;
        let wanted = box_radius_for(mu, rho, p, state, pair.energy);
        if pair.tail_weight() > 1e-10 {
            radius = radius.max(wanted) * 1.5;
        } else if wanted > 1.3 * radius || wanted < radius / 1.3 {
            radius = wanted;
        } else {
            return Ok(pair);
        }
        last = Some(pair);
    }
    Err(AfmError::ConvergenceFailure(format!(
        "box radius did not settle for (n, l) = ({}, {}); last energy {:?}",
        state.n,
        state.l,
        last.map(|p| p.energy)
    )))
}

/// Reduced mass `ν₁ν₂/(ν₁+ν₂)` and coupling `ρ = V'(r0)/(|p|·r0^(p−1))` of the
/// auxiliary Hamiltonian that the AFM solution stands for.
pub fn auxiliary_parameters(sol: &AfmSolution, v: &PowerLawPotential, p: f64) -> (f64, f64) {
    let mu = sol.nu1 * sol.nu2 / (sol.nu1 + sol.nu2);
    let rho = v.derivative(sol.r0) / (p.abs() * sol.r0.powf(p - 1.0));
    (mu, rho)
}

/// The `(n, l)` eigenstate of the auxiliary power-law Hamiltonian attached to
/// an AFM solution, an approximation of the genuine eigenstate.
pub fn afm_eigenstate(
    sol: &AfmSolution,
    v: &PowerLawPotential,
    p: f64,
    state: QuantumState,
    grid: SpectralGrid,
) -> Result<RadialEigenpair> {
    let (mu, rho) = auxiliary_parameters(sol, v, p);
    if !(rho.is_finite() && rho > 0.0) {
        return Err(AfmError::DomainError(format!(
            "auxiliary coupling {rho} is not positive at r0 = {}",
            sol.r0
        )));
    }
    nr_eigenvalue(mu, rho, p, state, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::afm::{closed_form::coulomb_closed, solve_afm};
    use crate::airy::airy_ai_zero;
    use crate::quantum::GlobalQ;

    fn grid(r: f64, n: usize) -> SpectralGrid {
        SpectralGrid::new(r, n).unwrap()
    }

    #[test]
    fn harmonic_ground_state() {
        let e = nr_eigenvalue(1.0, 0.5, 2.0, QuantumState::GROUND, grid(12.0, 64)).unwrap();
        assert!((e.energy - 1.5).abs() < 1e-9, "{}", e.energy);
        assert!((e.norm() - 1.0).abs() < 1e-10);
        assert_eq!(e.node_count(), 0);
    }

    #[test]
    fn hydrogen_ground_state() {
        let e = nr_eigenvalue(1.0, 1.0, -1.0, QuantumState::GROUND, grid(40.0, 200)).unwrap();
        assert!((e.energy + 0.5).abs() < 5e-8, "{}", e.energy);
    }

    #[test]
    fn linear_ground_state_is_airy_zero() {
        let e = nr_eigenvalue(0.5, 1.0, 1.0, QuantumState::GROUND, grid(14.0, 100)).unwrap();
        assert!((e.energy + airy_ai_zero(0)).abs() < 1e-8, "{}", e.energy);
    }

    #[test]
    fn hydrogen_excited_levels_and_nodes() {
        for (n, l) in [(1, 0), (0, 1), (2, 1), (1, 2)] {
            let st = QuantumState::new(n, l);
            let q = (n + l + 1) as f64;
            let e = nr_eigenvalue_auto(1.0, 1.0, -1.0, st, 128, -0.5 / (q * q)).unwrap();
            assert!((e.energy * 2.0 * q * q + 1.0).abs() < 1e-7, "{n},{l}: {}", e.energy);
            assert_eq!(e.node_count(), n as usize);
        }
    }

    #[test]
    fn virial_theorem() {
        // 2⟨T⟩ = p⟨V⟩ with ⟨T⟩ = ε − ⟨V⟩
        for &p in &[2.0, 1.0, 0.5, -1.0] {
            let st = QuantumState::new(1, 1);
            let e = nr_eigenvalue_auto(1.0, 1.0, p, st, 128, if p > 0.0 { 4.0 } else { -0.1 }).unwrap();
            let v = p.signum() * e.power_expectation(p);
            let t = e.kinetic_expectation(1.0, st.l);
            assert!((2.0 * t - p * v).abs() < 1e-5 * t.abs(), "p={p}: T={t} V={v}");
        }
    }

    #[test]
    fn scaling_law() {
        // ε ∝ μ^(−p/(p+2)) at fixed ρ
        for &p in &[1.0, -1.0, 0.5] {
            let st = QuantumState::GROUND;
            let guess = if p > 0.0 { 2.0 } else { -0.3 };
            let base = nr_eigenvalue_auto(1.0, 1.0, p, st, 128, guess).unwrap().energy;
            for &s in &[2.0, 10.0] {
                let e = nr_eigenvalue_auto(s, 1.0, p, st, 128, guess * s.powf(-p / (p + 2.0))).unwrap().energy;
                let want = base * s.powf(-p / (p + 2.0));
                assert!((e / want - 1.0).abs() < 1e-7, "p={p} s={s}");
            }
        }
    }

    #[test]
    fn wide_box_hydrogen_is_unbound_when_too_small() {
        let st = QuantumState::new(3, 0);
        let r = nr_eigenvalue(1.0, 1.0, -1.0, st, grid(4.0, 64));
        assert!(matches!(r, Err(AfmError::DomainError(_))));
    }

    #[test]
    fn auxiliary_couplings() {
        let q = GlobalQ::supplied(1.0, Some(-1.0)).unwrap();
        let s = coulomb_closed(1.0, 1.2, q).unwrap();
        let v = PowerLawPotential::coulomb(1.2).unwrap();
        let (_, rho) = auxiliary_parameters(&s, &v, -1.0);
        assert!((rho - 1.2).abs() < 1e-13);

        let v = PowerLawPotential::linear(0.2).unwrap();
        let q = GlobalQ::supplied(1.5, Some(2.0)).unwrap();
        let s = solve_afm(0.0, 1.0, &v, q).unwrap();
        assert!((auxiliary_parameters(&s, &v, 1.0).1 - 0.2).abs() < 1e-15);
        let rho = auxiliary_parameters(&s, &v, 2.0).1;
        assert!((rho - 0.030_665_353_164_984_782).abs() < 1e-12, "{rho}");

        let e = afm_eigenstate(&s, &v, 2.0, QuantumState::GROUND, grid(6.0 * s.r0, 64)).unwrap();
        let (mu, rho) = auxiliary_parameters(&s, &v, 2.0);
        // harmonic: ε = ω(2n + l + 3/2) with ω = √(2ρ/μ)
        assert!((e.energy - 1.5 * (2.0 * rho / mu).sqrt()).abs() < 1e-8 * e.energy);
    }
}
