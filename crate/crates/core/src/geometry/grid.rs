use std::f64::consts::PI;
use std::sync::Arc;

use super::spectral::{Order, SpectralDiff};
use crate::error::{Error, Result};

/// Smallest accepted normal-angle grid.
pub const MIN_GRID_SIZE: usize = 16;

/// Uniform periodic grid of normal angles `θ_j = 2πj/N`.
///
/// Carries the planned transforms used for θ-differentiation, so cloning a
/// grid is cheap and every state sampled on it can be differentiated without
/// re-planning.
#[derive(Debug, Clone)]
pub struct AngleGrid {
    thetas: Arc<[f64]>,
    diff: SpectralDiff,
}

impl PartialEq for AngleGrid {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len()
    }
}

impl AngleGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < MIN_GRID_SIZE || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "sample count must be even and at least {MIN_GRID_SIZE}, got {n}"
            )));
        }
        let thetas: Arc<[f64]> = (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
        Ok(Self {
            thetas,
            diff: SpectralDiff::new(n),
        })
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    /// Grid spacing `Δθ = 2π/N`.
    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.len() as f64
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn theta(&self, j: usize) -> f64 {
        self.thetas[j % self.len()]
    }

    /// Outward unit normal `(cos θ_j, sin θ_j)`.
    pub fn normal(&self, j: usize) -> [f64; 2] {
        let t = self.theta(j);
        [t.cos(), t.sin()]
    }

    /// Samples `f(θ_j)` for every grid angle.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.thetas.iter().map(|&t| f(t)).collect()
    }

    pub fn derivative(&self, values: &[f64], order: Order) -> Result<Vec<f64>> {
        self.diff.derivative(values, order)
    }

    pub(crate) fn spectral(&self) -> &SpectralDiff {
        &self.diff
    }

    /// Trapezoidal (spectrally accurate) integral over one period.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        values.iter().sum::<f64>() * self.spacing()
    }

    /// Index of the grid angle closest to `theta` (taken modulo 2π).
    pub fn nearest_index(&self, theta: f64) -> usize {
        let x = theta.rem_euclid(2.0 * PI) / self.spacing();
        (x.round() as usize) % self.len()
    }
}
