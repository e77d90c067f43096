use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Time-step control.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum TimeStep {
    /// Constant step; the run fails with `CflViolation` if it exceeds the
    /// stability bound.
    Fixed { dt: f64 },
    /// Step recomputed every step as `cfl_safety · Δθ / (max|k S_θτ| + 1)`.
    Adaptive { cfl_safety: f64 },
}

/// Largest admissible CFL safety factor.
pub const MAX_CFL_SAFETY: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FlowConfig {
    /// θ-grid size (support solver) or σ output grid size (Lagrangian solver).
    pub n: usize,
    pub step: TimeStep,
    pub t_end: f64,
    /// Absolute convexity floor; `None` means `1e-8 · mean(S0)`.
    pub eps_convex: Option<f64>,
    /// Store a snapshot every this many accepted steps.
    pub record_every: usize,
    /// When set, snapshots are taken exactly at multiples of this interval
    /// instead (steps are shortened to land on them), so runs with different
    /// data share a recording schedule.
    pub record_interval: Option<f64>,
    /// Vertex resampling cadence of the Lagrangian solver, in steps.
    pub resample_every: usize,
    pub max_steps: usize,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            n: 128,
            step: TimeStep::Adaptive { cfl_safety: 0.5 },
            t_end: 1.0,
            eps_convex: None,
            record_every: 1,
            record_interval: None,
            resample_every: 50,
            max_steps: 2_000_000,
        }
    }
}

impl FlowConfig {
    pub fn with_interval(mut self, interval: f64) -> Self {
        self.record_interval = Some(interval);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        match self.step {
            TimeStep::Fixed { dt } if !(dt.is_finite() && dt > 0.0) => {
                return bad(format!("fixed dt must be positive, got {dt}"))
            }
            TimeStep::Adaptive { cfl_safety }
                if !(cfl_safety > 0.0 && cfl_safety <= MAX_CFL_SAFETY) =>
            {
                return bad(format!(
                    "cfl_safety must lie in (0, {MAX_CFL_SAFETY}], got {cfl_safety}"
                ))
            }
            _ => {}
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return bad(format!("t_end must be positive, got {}", self.t_end));
        }
        if let Some(eps) = self.eps_convex {
            if !(eps.is_finite() && eps > 0.0) {
                return bad(format!("eps_convex must be positive, got {eps}"));
            }
        }
        if self.record_every == 0 || self.resample_every == 0 || self.max_steps == 0 {
            return bad("record_every, resample_every and max_steps must be positive".into());
        }
        if let Some(iv) = self.record_interval {
            if !(iv.is_finite() && iv > 0.0) {
                return bad(format!("record_interval must be positive, got {iv}"));
            }
        }
        Ok(())
    }
}

/// Recording clock shared by both solvers.
#[derive(Debug, Clone)]
pub(crate) struct Recorder {
    every: usize,
    interval: Option<f64>,
    next_mark: usize,
}

impl Recorder {
    pub(crate) fn new(cfg: &FlowConfig) -> Self {
        Self {
            every: cfg.record_every,
            interval: cfg.record_interval,
            next_mark: 1,
        }
    }

    /// Next time the step must land on, if any.
    pub(crate) fn next_time(&self) -> Option<f64> {
        self.interval.map(|iv| iv * self.next_mark as f64)
    }

    /// Whether the state reached after `step` accepted steps at time `t`
    /// should be stored; advances the clock.
    pub(crate) fn due(&mut self, step: usize, t: f64) -> bool {
        match self.interval {
            Some(iv) => {
                let mark = iv * self.next_mark as f64;
                if t >= mark - 1e-12 * mark.max(1.0) {
                    self.next_mark += 1;
                    true
                } else {
                    false
                }
            }
            None => step.is_multiple_of(self.every),
        }
    }
}

/// Step size clipped to the horizon and the next recording time.
pub(crate) fn clip_step(dt: f64, t: f64, t_end: f64, mark: Option<f64>) -> f64 {
    let mut h = dt.min(t_end - t);
    if let Some(m) = mark {
        if m > t {
            h = h.min(m - t);
        }
    }
    h
}
