use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{PlaneCurve, SupportState};

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Termination {
    HorizonReached,
    ConvexityLost { t: f64, theta_lo: f64, theta_hi: f64 },
    LengthVanished { t: f64 },
    CurvatureBlowup { t: f64 },
}

impl Termination {
    /// Time of a singular termination; `None` when the horizon was reached.
    pub fn singular_time(&self) -> Option<f64> {
        match *self {
            Termination::HorizonReached => None,
            Termination::ConvexityLost { t, .. }
            | Termination::LengthVanished { t }
            | Termination::CurvatureBlowup { t } => Some(t),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Termination::HorizonReached => "HorizonReached",
            Termination::ConvexityLost { .. } => "ConvexityLost",
            Termination::LengthVanished { .. } => "LengthVanished",
            Termination::CurvatureBlowup { .. } => "CurvatureBlowup",
        }
    }
}

/// Anything stored as a trajectory snapshot.
pub trait Snapshot {
    fn time(&self) -> f64;
}

impl Snapshot for SupportState {
    fn time(&self) -> f64 {
        self.t()
    }
}

impl Snapshot for PlaneCurve {
    fn time(&self) -> f64 {
        self.t()
    }
}

/// Time-ordered snapshots of one run and how it ended.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrajectory<S> {
    pub snapshots: Vec<S>,
    pub termination: Termination,
    /// Accepted steps taken.
    pub steps: usize,
}

impl<S: Snapshot> FlowTrajectory<S> {
    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(Snapshot::time).collect()
    }

    pub fn first(&self) -> &S {
        &self.snapshots[0]
    }

    pub fn last(&self) -> &S {
        self.snapshots.last().expect("trajectories hold the initial snapshot")
    }

    pub fn final_time(&self) -> f64 {
        self.last().time()
    }

    /// Snapshot recorded at time `t` (to `1e-9` relative).
    pub fn at_time(&self, t: f64) -> Option<&S> {
        let tol = 1e-9 * t.abs().max(1.0);
        self.snapshots.iter().find(|s| (s.time() - t).abs() <= tol)
    }

    /// Index pair `(i, i + 1)` and weight `w` with `t = (1 − w)t_i + w t_{i+1}`.
    pub(crate) fn bracket(&self, t: f64) -> Result<(usize, usize, f64)> {
        let (lo, hi) = (self.first().time(), self.final_time());
        let tol = 1e-9 * t.abs().max(1.0);
        if !(t >= lo - tol && t <= hi + tol) {
            return Err(Error::OutOfRange { t, lo, hi });
        }
        let n = self.snapshots.len();
        if n == 1 {
            return Ok((0, 0, 0.0));
        }
        let i = self
            .snapshots
            .partition_point(|s| s.time() <= t + tol)
            .clamp(1, n - 1)
            - 1;
        let (ta, tb) = (self.snapshots[i].time(), self.snapshots[i + 1].time());
        let w = ((t - ta) / (tb - ta)).clamp(0.0, 1.0);
        Ok((i, i + 1, w))
    }
}
