use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{AfmError, Result};

pub const MIN_POINTS: usize = 64;

/// Uniform hard-wall grid `r_i = i·R/(N+1)`, `i = 1..N`, on `(0, R)`.
///
/// The basis behind it is `φ_j(r) = √(2/R)·sin(jπr/R)`; the discrete sine
/// transform maps grid samples to basis coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralGrid {
    box_radius: f64,
    points: usize,
}

impl SpectralGrid {
    pub fn new(box_radius: f64, points: usize) -> Result<Self> {
        if !(box_radius.is_finite() && box_radius > 0.0) {
            return Err(AfmError::DomainError(format!(
                "box radius must be positive, got {box_radius}"
            )));
        }
        if points < MIN_POINTS {
            return Err(AfmError::DomainError(format!(
                "grid needs at least {MIN_POINTS} points, got {points}"
            )));
        }
        Ok(Self { box_radius, points })
    }

    pub fn box_radius(&self) -> f64 {
        self.box_radius
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        self.box_radius / (self.points + 1) as f64
    }

    pub fn radius(&self, i: usize) -> f64 {
        (i + 1) as f64 * self.spacing()
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.radius(i)).collect()
    }

    /// Wavenumber `k_j = jπ/R` of basis function `j+1`.
    pub fn wavenumber(&self, j: usize) -> f64 {
        (j + 1) as f64 * std::f64::consts::PI / self.box_radius
    }

    /// Same box, twice the points.
    pub fn doubled(&self) -> Self {
        Self {
            box_radius: self.box_radius,
            points: 2 * self.points,
        }
    }

    pub fn with_points(&self, points: usize) -> Result<Self> {
        Self::new(self.box_radius, points)
    }

    /// Orthogonal, symmetric DST-I matrix `√(2/(N+1))·sin(π(i+1)(j+1)/(N+1))`.
    pub fn sine_transform(&self) -> Mat<f64> {
        let n1 = (self.points + 1) as f64;
        let norm = (2.0 / n1).sqrt();
        // sin(πk/(N+1)) depends only on k mod 2(N+1); tabulate it once.
        let period = 2 * (self.points + 1);
        let table: Vec<f64> = (0..period)
            .map(|k| (std::f64::consts::PI * k as f64 / n1).sin())
            .collect();
        Mat::from_fn(self.points, self.points, |i, j| {
            norm * table[((i + 1) * (j + 1)) % period]
        })
    }

    /// Grid samples `u(r_i)` of `Σ c_j φ_j`, so that `Σ u²·Δr = Σ c²`.
    pub fn samples_from_coefficients(&self, c: &[f64]) -> Vec<f64> {
        let s = self.sine_transform();
        let scale = ((self.points + 1) as f64 / self.box_radius).sqrt();
        (0..self.points)
            .map(|i| scale * (0..self.points).map(|j| s[(i, j)] * c[j]).sum::<f64>())
            .collect()
    }
}
