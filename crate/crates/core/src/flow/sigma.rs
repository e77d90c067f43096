//! Normal speed `σ̃(θ, t)` sampled on a normal-angle grid, for either solver.

use std::f64::consts::PI;

use super::trajectory::{FlowTrajectory, Snapshot};
use crate::error::{Error, Result};
use crate::geometry::support::support_samples;
use crate::geometry::{AngleGrid, PeriodicCubic, PlaneCurve, SupportState};

/// Snapshots that can report their normal speed on a θ grid.
pub trait NormalSpeed: Snapshot {
    fn normal_speed(&self, grid: &AngleGrid) -> Result<Vec<f64>>;
}

impl NormalSpeed for SupportState {
    /// `σ̃ = S_τ = V`; the grid must be the state's own.
    fn normal_speed(&self, grid: &AngleGrid) -> Result<Vec<f64>> {
        if grid.len() != self.grid().len() {
            return Err(Error::InvalidGrid(format!(
                "state lives on {} samples, asked for {}",
                self.grid().len(),
                grid.len()
            )));
        }
        Ok(self.v().to_vec())
    }
}

impl NormalSpeed for PlaneCurve {
    /// Per-vertex σ interpolated in the vertices' normal angles.
    fn normal_speed(&self, grid: &AngleGrid) -> Result<Vec<f64>> {
        let angles = self.frame().normal_angle;
        let start = (0..angles.len())
            .min_by(|&a, &b| angles[a].total_cmp(&angles[b]))
            .unwrap_or(0);
        let m = angles.len();
        let params: Vec<f64> = (0..m).map(|i| angles[(start + i) % m]).collect();
        let values: Vec<f64> = (0..m).map(|i| self.sigma()[(start + i) % m]).collect();
        let cubic = PeriodicCubic::new(&params, 2.0 * PI, &values)?;
        Ok(grid.thetas().iter().map(|&th| cubic.eval(th)).collect())
    }
}

/// `σ̃(θ_j, t)`, linear in time between the bracketing snapshots.
pub fn sigma_field<S: NormalSpeed>(
    traj: &FlowTrajectory<S>,
    t: f64,
    grid: &AngleGrid,
) -> Result<Vec<f64>> {
    let (i, k, w) = traj.bracket(t)?;
    let a = traj.snapshots[i].normal_speed(grid)?;
    if w == 0.0 {
        return Ok(a);
    }
    let b = traj.snapshots[k].normal_speed(grid)?;
    Ok(a.iter().zip(&b).map(|(x, y)| (1.0 - w) * x + w * y).collect())
}

/// `max_θ |h_state − h_curve|` with both support functions taken about the
/// origin on the state's grid: the Hausdorff distance between the support
/// solver's curve and a vertex curve.
pub fn support_curve_distance(state: &SupportState, curve: &PlaneCurve) -> f64 {
    let h_curve = support_samples(curve.points(), state.grid());
    state
        .absolute_support()
        .iter()
        .zip(&h_curve)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_sigma_follows_normal_angle() {
        let m = 64;
        let pts = (0..m)
            .map(|i| {
                let a = 2.0 * PI * (i as f64 + 0.3) / m as f64;
                [a.cos(), a.sin()]
            })
            .collect();
        let sigma = (0..m)
            .map(|i| (2.0 * PI * (i as f64 + 0.3) / m as f64).cos())
            .collect();
        let c = PlaneCurve::new(pts, sigma, 0.0).unwrap();
        let grid = AngleGrid::new(32).unwrap();
        for (s, th) in c.normal_speed(&grid).unwrap().iter().zip(grid.thetas()) {
            assert!((s - th.cos()).abs() < 1e-4);
        }
    }
}
