//! Checks over support-flow and vertex-flow trajectories.

use serde::Serialize;

use super::report::{MonitorRecord, MonitorReport};
use crate::error::{Error, Result};
use crate::flow::{max_tangential_velocity, FlowTrajectory, Termination};
use crate::geometry::{Order, PlaneCurve, SupportState};

/// Number of leading snapshots whose times are equally spaced.
fn uniform_prefix(times: &[f64]) -> usize {
    if times.len() < 2 {
        return times.len();
    }
    let h = times[1] - times[0];
    let mut count = 2;
    while count < times.len() {
        let step = times[count] - times[count - 1];
        if (step - h).abs() > 1e-9 * h {
            break;
        }
        count += 1;
    }
    count
}

/// `(t, L)` for every snapshot, with `L = ∫ S dθ`.
pub fn length_series(traj: &FlowTrajectory<SupportState>) -> Vec<(f64, f64)> {
    traj.snapshots
        .iter()
        .map(|s| (s.t(), s.grid().integrate(s.s())))
        .collect()
}

/// Containment margin `min over snapshots and θ of (S_outer − S_inner)`,
/// support functions taken about the origin.
///
/// Both runs must start ordered (`S_inner ≤ S_outer`, `V_inner ≤ V_outer`),
/// share the θ grid and record at the same times over their common span.
pub fn check_containment(
    outer: &FlowTrajectory<SupportState>,
    inner: &FlowTrajectory<SupportState>,
) -> Result<MonitorRecord> {
    let (o0, i0) = (outer.first(), inner.first());
    if o0.grid().len() != i0.grid().len() {
        return Err(Error::SnapshotMismatch(format!(
            "grids of size {} and {}",
            o0.grid().len(),
            i0.grid().len()
        )));
    }
    let scale = o0
        .absolute_support()
        .iter()
        .chain(&i0.absolute_support())
        .fold(0.0f64, |a, x| a.max(x.abs()));
    let slack = 1e-12 * scale;
    let (so, si) = (o0.absolute_support(), i0.absolute_support());
    if let Some(j) = (0..so.len()).find(|&j| si[j] > so[j] + slack) {
        return Err(Error::PreconditionFailed(format!(
            "inner support exceeds outer at θ = {}",
            o0.grid().theta(j)
        )));
    }
    if let Some(j) = (0..so.len()).find(|&j| i0.v()[j] > o0.v()[j] + 1e-12) {
        return Err(Error::PreconditionFailed(format!(
            "inner speed exceeds outer at θ = {}",
            o0.grid().theta(j)
        )));
    }
    let common = outer.snapshots.len().min(inner.snapshots.len());
    let mut worst = (f64::INFINITY, 0.0, 0.0);
    for (i, (a, b)) in outer.snapshots[..common]
        .iter()
        .zip(&inner.snapshots[..common])
        .enumerate()
    {
        if (a.t() - b.t()).abs() > 1e-12 * a.t().abs().max(1.0) {
            // a singular run ends with one off-schedule state
            let terminal = i + 1 == outer.snapshots.len() || i + 1 == inner.snapshots.len();
            if terminal {
                break;
            }
            return Err(Error::SnapshotMismatch(format!(
                "outer recorded t = {}, inner t = {}",
                a.t(),
                b.t()
            )));
        }
        let (ha, hb) = (a.absolute_support(), b.absolute_support());
        for j in 0..ha.len() {
            let m = ha[j] - hb[j];
            if m < worst.0 {
                worst = (m, a.t(), a.grid().theta(j));
            }
        }
    }
    Ok(MonitorRecord::margin("containment", worst.0, 1e-6 * scale)
        .at(Some(worst.1), Some(worst.2)))
}

/// `min over the run of (k − δ)`; passes when `≥ −1e−3 δ`.
///
/// The lower bound is proved for shrinking data (`δ⁻¹ + max f < 0`); outside
/// that regime a violation is reported as flagged rather than failed.
pub fn check_convexity_bound(traj: &FlowTrajectory<SupportState>, delta: f64) -> MonitorRecord {
    let f_max = traj.first().v().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut worst = (f64::INFINITY, 0.0, 0.0);
    for s in &traj.snapshots {
        if let Ok(rho) = s.radius_of_curvature() {
            for (j, r) in rho.iter().enumerate() {
                let m = 1.0 / r - delta;
                if m < worst.0 {
                    worst = (m, s.t(), s.grid().theta(j));
                }
            }
        }
    }
    let record = MonitorRecord::margin("convexity_bound", worst.0, 1e-3 * delta)
        .at(Some(worst.1), Some(worst.2));
    if 1.0 / delta + f_max >= 0.0 {
        record.flag_failure(format!(
            "k fell below the initial minimum while 1/delta + max f = {} >= 0; \
             the lower bound is only established for shrinking data",
            1.0 / delta + f_max
        ))
    } else {
        record
    }
}

/// Residuals of `dL/dt = ∫σ̃ dθ` and `d²L/dt² = ∫(k σ̃_θ² + k⁻¹) dθ`, with
/// `L` differenced centrally over the leading equally spaced snapshots.
pub fn check_length_identities(traj: &FlowTrajectory<SupportState>) -> Result<MonitorReport> {
    let times = traj.times();
    let count = uniform_prefix(&times);
    if count < 5 {
        return Err(Error::InsufficientData(format!(
            "need at least 5 equally spaced snapshots, found {count}"
        )));
    }
    let snaps = &traj.snapshots[..count];
    let h = times[1] - times[0];
    let lengths: Vec<f64> = snaps.iter().map(|s| s.grid().integrate(s.s())).collect();
    let scale = lengths.iter().fold(0.0f64, |a, l| a.max(l.abs()));
    let (mut r1, mut r2) = ((0.0, 0.0), (0.0, 0.0));
    for i in 1..count - 1 {
        let s = &snaps[i];
        let grid = s.grid();
        let d1 = (lengths[i + 1] - lengths[i - 1]) / (2.0 * h);
        let d2 = (lengths[i + 1] - 2.0 * lengths[i] + lengths[i - 1]) / (h * h);
        let rho = s.radius_of_curvature()?;
        let v_th = grid.derivative(s.v(), Order::First)?;
        let integrand: Vec<f64> = rho
            .iter()
            .zip(&v_th)
            .map(|(r, w)| w * w / r + r)
            .collect();
        let e1 = (d1 - grid.integrate(s.v())).abs();
        let e2 = (d2 - grid.integrate(&integrand)).abs();
        if e1 > r1.0 {
            r1 = (e1, s.t());
        }
        if e2 > r2.0 {
            r2 = (e2, s.t());
        }
    }
    Ok(MonitorReport::from(vec![
        MonitorRecord::residual("length_first_identity", r1.0, 1e-3 * scale).at(Some(r1.1), None),
        MonitorRecord::residual("length_second_identity", r2.0, 1e-2 * scale).at(Some(r2.1), None),
    ]))
}

/// Data entering the long-time / finite-time dichotomy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutcomeInputs {
    /// Minimum initial curvature.
    pub delta: f64,
    /// Maximum initial curvature.
    pub zeta: f64,
    pub f_min: f64,
    pub f_max: f64,
    /// Circle-comparison horizon `½ ln((−1 + δ f_max)/(1 + δ f_max))`, defined
    /// when `δ⁻¹ + f_max < 0`.
    pub t_star: Option<f64>,
}

impl OutcomeInputs {
    pub fn new(delta: f64, zeta: f64, f_min: f64, f_max: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= zeta && zeta.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < delta <= zeta, got delta = {delta}, zeta = {zeta}"
            )));
        }
        if !(f_min <= f_max && f_min.is_finite() && f_max.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "need f_min <= f_max, got {f_min}, {f_max}"
            )));
        }
        let t_star = (1.0 / delta + f_max < 0.0)
            .then(|| 0.5 * ((-1.0 + delta * f_max) / (1.0 + delta * f_max)).ln());
        Ok(Self {
            delta,
            zeta,
            f_min,
            f_max,
            t_star,
        })
    }

    /// Inputs read off an initial support state.
    pub fn from_state(s: &SupportState) -> Result<Self> {
        let rho = s.radius_of_curvature()?;
        let delta = rho.iter().map(|r| 1.0 / r).fold(f64::INFINITY, f64::min);
        let zeta = rho.iter().map(|r| 1.0 / r).fold(0.0, f64::max);
        let f_min = s.v().iter().cloned().fold(f64::INFINITY, f64::min);
        let f_max = s.v().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Self::new(delta, zeta, f_min, f_max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Prediction {
    LongTime,
    FiniteTime { t_star: f64 },
    Indeterminate,
}

/// How a finite-time singularity presents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SingularKind {
    /// The length goes to zero.
    PointCollapse,
    /// The curvature blows up while the length stays bounded away from zero.
    CurvatureJump,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub prediction: Prediction,
    pub termination: Termination,
    pub singular_kind: Option<SingularKind>,
    /// The run does not contradict the prediction.
    pub agrees: bool,
    pub label: String,
    pub record: MonitorRecord,
}

/// Length ratio below which a singular run counts as collapsing to a point.
pub const COLLAPSE_LENGTH_RATIO: f64 = 0.05;

/// Slack on `T*` before a surviving run contradicts a finite-time prediction.
pub const T_STAR_SLACK: f64 = 1e-2;

pub fn predict_outcome(inputs: &OutcomeInputs) -> Prediction {
    if 1.0 / inputs.zeta + inputs.f_min > 0.0 {
        Prediction::LongTime
    } else if let Some(t_star) = inputs.t_star {
        Prediction::FiniteTime { t_star }
    } else {
        Prediction::Indeterminate
    }
}

/// Predicts the outcome from `inputs` and compares it with the run.
pub fn classify_outcome(traj: &FlowTrajectory<SupportState>, inputs: &OutcomeInputs) -> Outcome {
    let prediction = predict_outcome(inputs);
    let termination = traj.termination;
    let singular_kind = termination.singular_time().map(|_| match termination {
        Termination::LengthVanished { .. } => SingularKind::PointCollapse,
        _ => {
            let series = length_series(traj);
            let (l0, l1) = (series[0].1, series[series.len() - 1].1);
            if l1 <= COLLAPSE_LENGTH_RATIO * l0 {
                SingularKind::PointCollapse
            } else {
                SingularKind::CurvatureJump
            }
        }
    });
    let t_final = traj.final_time();
    let (agrees, record) = match prediction {
        Prediction::LongTime => {
            let reached = termination == Termination::HorizonReached;
            (
                reached,
                MonitorRecord::residual("outcome", if reached { 0.0 } else { 1.0 }, 0.0)
                    .at(Some(t_final), None)
                    .with_note("long-time prediction; 0 when the horizon was reached"),
            )
        }
        Prediction::FiniteTime { t_star } => {
            let margin = t_star + T_STAR_SLACK - t_final;
            (
                margin >= 0.0,
                MonitorRecord::margin("outcome", margin, 0.0)
                    .at(Some(t_final), None)
                    .with_note(format!("finite-time prediction, T* = {t_star}")),
            )
        }
        Prediction::Indeterminate => (
            true,
            MonitorRecord::residual("outcome", 0.0, 0.0)
                .at(Some(t_final), None)
                .with_note("neither dichotomy hypothesis holds"),
        ),
    };
    let pred = match prediction {
        Prediction::LongTime => "LongTime".to_string(),
        Prediction::FiniteTime { .. } => "FiniteTime".to_string(),
        Prediction::Indeterminate => "Indeterminate".to_string(),
    };
    let label = match singular_kind {
        Some(kind) => format!("{pred}/{kind:?}"),
        None => pred,
    };
    Outcome {
        prediction,
        termination,
        singular_kind,
        agrees,
        label,
        record,
    }
}

/// `max over recorded states of max_j |⟨P'_j, T_j⟩| / max|σ|`; passes when
/// `≤ 1e−6`.
pub fn check_normal_flow(traj: &FlowTrajectory<PlaneCurve>) -> MonitorRecord {
    let mut worst = (0.0, 0.0);
    for c in &traj.snapshots {
        let smax = c.sigma().iter().fold(0.0f64, |a, s| a.max(s.abs()));
        let ratio = if smax > 0.0 {
            max_tangential_velocity(c) / smax
        } else {
            0.0
        };
        if ratio > worst.0 {
            worst = (ratio, c.t());
        }
    }
    MonitorRecord::residual("normal_flow", worst.0, 1e-6).at(Some(worst.1), None)
}

/// Coefficients `(C, p)` of the `k_θ²` term `−C k_θ² / k^p` in the evolution
/// equation of the curvature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KttCoefficient {
    pub c: f64,
    pub p: i32,
}

/// The coefficient confirmed by symbolic differentiation of
/// `k = 1/(S_θθ + S)` along the flow.
pub const KTT_COEFFICIENT: KttCoefficient = KttCoefficient { c: 2.0, p: 1 };

/// Right side of the curvature evolution equation at the middle of three
/// snapshots spaced `h` apart, together with the second difference `k_tt`.
fn ktt_pair(
    prev: &SupportState,
    mid: &SupportState,
    next: &SupportState,
    h: f64,
    coeff: KttCoefficient,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let grid = mid.grid();
    let k = |s: &SupportState| -> Result<Vec<f64>> {
        Ok(s.radius_of_curvature()?.iter().map(|r| 1.0 / r).collect())
    };
    let (ka, kb, kc) = (k(prev)?, k(mid)?, k(next)?);
    let k_tt: Vec<f64> = (0..kb.len())
        .map(|j| (kc[j] - 2.0 * kb[j] + ka[j]) / (h * h))
        .collect();
    let k_t: Vec<f64> = (0..kb.len()).map(|j| (kc[j] - ka[j]) / (2.0 * h)).collect();
    let k_th = grid.derivative(&kb, Order::First)?;
    let k_thth = grid.derivative(&kb, Order::Second)?;
    let k_tth = grid.derivative(&k_t, Order::First)?;
    let s_t = mid.v();
    let s_tth = grid.derivative(s_t, Order::First)?;
    let rhs = (0..kb.len())
        .map(|j| {
            let (kk, w, st) = (kb[j], s_tth[j], s_t[j]);
            kk * kk * (1.0 / (kk * kk) - w * w) * k_thth[j]
                + 2.0 * kk * w * k_tth[j]
                + 4.0 * kk * kk * w * st * k_th[j]
                - coeff.c * k_th[j] * k_th[j] / kk.powi(coeff.p)
                - 4.0 * kk * st * k_t[j]
                + kk.powi(3) * (w * w - 2.0 * st * st - 1.0 / (kk * kk))
        })
        .collect();
    Ok((k_tt, rhs))
}

/// Worst `|k_tt − RHS|` over the interior of the leading equally spaced
/// snapshots, relative to `max|k_tt|`.
pub fn curvature_evolution_residual(
    traj: &FlowTrajectory<SupportState>,
    coeff: KttCoefficient,
    tolerance: f64,
) -> Result<MonitorRecord> {
    let times = traj.times();
    let count = uniform_prefix(&times);
    if count < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 equally spaced snapshots, found {count}"
        )));
    }
    let h = times[1] - times[0];
    let mut worst = (0.0, 0.0, 0.0);
    let mut scale: f64 = 0.0;
    for i in 1..count - 1 {
        let s = &traj.snapshots;
        let (k_tt, rhs) = ktt_pair(&s[i - 1], &s[i], &s[i + 1], h, coeff)?;
        for j in 0..k_tt.len() {
            scale = scale.max(k_tt[j].abs());
            let e = (k_tt[j] - rhs[j]).abs();
            if e > worst.0 {
                worst = (e, s[i].t(), s[i].grid().theta(j));
            }
        }
    }
    let name = format!("curvature_evolution(C={}, p={})", coeff.c, coeff.p);
    Ok(MonitorRecord::residual(name, worst.0 / scale.max(f64::MIN_POSITIVE), tolerance)
        .at(Some(worst.1), Some(worst.2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_prefix_stops_at_irregular_step() {
        assert_eq!(uniform_prefix(&[0.0, 0.1, 0.2, 0.3, 0.35]), 4);
        assert_eq!(uniform_prefix(&[0.0]), 1);
    }

    #[test]
    fn outcome_inputs_and_predictions() {
        // circle r0 = 1, f = −2
        let i = OutcomeInputs::new(1.0, 1.0, -2.0, -2.0).unwrap();
        let t_star = i.t_star.unwrap();
        assert!((t_star - 0.5 * 3f64.ln()).abs() < 1e-15);
        assert_eq!(predict_outcome(&i), Prediction::FiniteTime { t_star });
        // circle r0 = 1, f = −0.5
        let i = OutcomeInputs::new(1.0, 1.0, -0.5, -0.5).unwrap();
        assert_eq!(predict_outcome(&i), Prediction::LongTime);
        // neither hypothesis
        let i = OutcomeInputs::new(0.5, 2.0, -1.0, -1.0).unwrap();
        assert_eq!(predict_outcome(&i), Prediction::Indeterminate);
        assert!(OutcomeInputs::new(2.0, 1.0, 0.0, 0.0).is_err());
    }
}
