//! Vertex form of the flow: `P' = σ ν(P)`, `σ' = 1/k(P)`.
//!
//! Each vertex moves along its own outward normal, so the tangential
//! velocity vanishes by construction and vertices cluster where the curve
//! bends. Every `resample_every` steps they are redistributed to equal arc
//! length, carrying σ along by cubic interpolation.

use super::config::{clip_step, FlowConfig, Recorder, TimeStep, MAX_CFL_SAFETY};
use super::trajectory::{FlowTrajectory, Termination};
use crate::error::{ensure_finite, Error, Result};
use crate::geometry::curve::{dist, dot, frame_of};
use crate::geometry::{PlaneCurve, Point};

/// Instantaneous vertex velocity `σ_j ν_j`.
pub fn vertex_velocity(c: &PlaneCurve) -> Vec<Point> {
    let frame = c.frame();
    c.sigma()
        .iter()
        .zip(&frame.normal)
        .map(|(s, n)| [s * n[0], s * n[1]])
        .collect()
}

/// `max_j |⟨P'_j, T_j⟩|`.
pub fn max_tangential_velocity(c: &PlaneCurve) -> f64 {
    let frame = c.frame();
    vertex_velocity(c)
        .iter()
        .zip(&frame.tangent)
        .map(|(v, t)| dot(*v, *t).abs())
        .fold(0.0, f64::max)
}

struct Derivative {
    dp: Vec<Point>,
    dsigma: Vec<f64>,
}

fn derivative(points: &[Point], sigma: &[f64]) -> Result<Derivative> {
    PlaneCurve::new_unchecked(points.to_vec(), sigma.to_vec(), 0.0).validate()?;
    let frame = frame_of(points);
    if let Some(j) = frame.curvature.iter().position(|&k| k <= 0.0 || k.is_nan()) {
        return Err(Error::NotConvex(format!(
            "discrete curvature {} at vertex {j}",
            frame.curvature[j]
        )));
    }
    let dp = sigma
        .iter()
        .zip(&frame.normal)
        .map(|(s, n)| [s * n[0], s * n[1]])
        .collect();
    let dsigma = frame.curvature.iter().map(|k| 1.0 / k).collect();
    Ok(Derivative { dp, dsigma })
}

fn rk4(c: &PlaneCurve, first: &Derivative, h: f64) -> Result<PlaneCurve> {
    let p = c.points();
    let s = c.sigma();
    let advance = |d: &Derivative, a: f64| -> (Vec<Point>, Vec<f64>) {
        (
            p.iter()
                .zip(&d.dp)
                .map(|(x, v)| [x[0] + a * v[0], x[1] + a * v[1]])
                .collect(),
            s.iter().zip(&d.dsigma).map(|(x, v)| x + a * v).collect(),
        )
    };
    let (p2, s2) = advance(first, 0.5 * h);
    let k2 = derivative(&p2, &s2)?;
    let (p3, s3) = advance(&k2, 0.5 * h);
    let k3 = derivative(&p3, &s3)?;
    let (p4, s4) = advance(&k3, h);
    let k4 = derivative(&p4, &s4)?;
    let ks = [first, &k2, &k3, &k4];
    let wts = [1.0, 2.0, 2.0, 1.0];
    let mut points = p.to_vec();
    let mut sigma = s.to_vec();
    for (k, w) in ks.iter().zip(wts) {
        for j in 0..points.len() {
            points[j][0] += h / 6.0 * w * k.dp[j][0];
            points[j][1] += h / 6.0 * w * k.dp[j][1];
            sigma[j] += h / 6.0 * w * k.dsigma[j];
        }
    }
    PlaneCurve::new(points, sigma, c.t() + h)
}

/// One fourth-order step of size `dt`; the vertex count is preserved.
pub fn step_lagrangian(c: &PlaneCurve, dt: f64) -> Result<PlaneCurve> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidConfig(format!("time step must be positive, got {dt}")));
    }
    let first = derivative(c.points(), c.sigma())?;
    rk4(c, &first, dt)
}

/// Step bound `min turning angle / (max|σ_s| + 1)`: the wave speed in the
/// normal angle is one, plus the drift of each vertex's normal angle.
pub fn lagrangian_cfl_unit(c: &PlaneCurve) -> f64 {
    let p = c.points();
    let s = c.sigma();
    let m = p.len();
    let mut drift: f64 = 0.0;
    for j in 0..m {
        let (a, b) = ((j + m - 1) % m, (j + 1) % m);
        let ds = dist(p[a], p[j]) + dist(p[j], p[b]);
        drift = drift.max(((s[b] - s[a]) / ds).abs());
    }
    let min_turn = c.turning_angles().into_iter().fold(f64::INFINITY, f64::min);
    min_turn / (drift + 1.0)
}

/// Runs the vertex flow from `f0` with initial normal speed `f` per vertex.
pub fn run_lagrangian_flow(
    f0: &PlaneCurve,
    f: &[f64],
    cfg: &FlowConfig,
) -> Result<FlowTrajectory<PlaneCurve>> {
    cfg.validate()?;
    ensure_finite(f, "initial normal speed")?;
    let initial = f0.clone().with_sigma(f.to_vec())?.with_time(0.0);
    let m = initial.len();
    let l0 = initial.perimeter();
    let eps = cfg
        .eps_convex
        .unwrap_or(1e-8 * l0 / (2.0 * std::f64::consts::PI));
    let min_h = 1e-13 * cfg.t_end.max(1.0);

    let mut recorder = Recorder::new(cfg);
    let mut snapshots = vec![initial.clone()];
    let mut cur = initial;
    let mut steps = 0usize;
    let mut cap: Option<f64> = None;
    let mut recorded_last = true;

    let termination = loop {
        let t = cur.t();
        if t >= cfg.t_end - 1e-12 * cfg.t_end {
            break Termination::HorizonReached;
        }
        if steps >= cfg.max_steps {
            return Err(Error::InvalidConfig(format!(
                "step budget of {} exhausted at t = {t}",
                cfg.max_steps
            )));
        }
        let first = derivative(cur.points(), cur.sigma())?;
        let unit = lagrangian_cfl_unit(&cur);
        let mut dt = match cfg.step {
            TimeStep::Fixed { dt } => {
                if dt > MAX_CFL_SAFETY * unit {
                    return Err(Error::CflViolation {
                        dt,
                        bound: MAX_CFL_SAFETY * unit,
                    });
                }
                dt
            }
            TimeStep::Adaptive { cfl_safety } => {
                // keep each vertex's displacement a fraction of the local
                // radius of curvature
                let reach = first
                    .dsigma
                    .iter()
                    .zip(cur.sigma())
                    .map(|(rho, s)| rho / s.abs())
                    .fold(f64::INFINITY, f64::min);
                cfl_safety * unit.min(reach)
            }
        };
        if let Some(c) = cap {
            dt = dt.min(c);
        }
        let mark = recorder.next_time();
        let mut h = clip_step(dt, t, cfg.t_end, mark);
        let accepted = loop {
            match rk4(&cur, &first, h) {
                Ok(next) => break Ok(next),
                Err(err) => {
                    h *= 0.5;
                    cap = Some(h);
                    if h < min_h {
                        break Err(err);
                    }
                }
            }
        };
        let mut next = match accepted {
            Ok(next) => next,
            Err(_) => {
                let frame = cur.frame();
                let (lo, hi) = worst_turn_range(&cur, &frame.normal_angle);
                break Termination::ConvexityLost {
                    t,
                    theta_lo: lo,
                    theta_hi: hi,
                };
            }
        };
        if let Some(c) = cap {
            cap = Some(2.0 * c);
        }
        let t_new = if mark.is_some_and(|mk| (t + h - mk).abs() <= 1e-12 * mk.max(1.0)) {
            mark.unwrap_or(t + h)
        } else if (t + h - cfg.t_end).abs() <= 1e-12 * cfg.t_end {
            cfg.t_end
        } else {
            t + h
        };
        next = next.with_time(t_new);
        steps += 1;
        if steps.is_multiple_of(cfg.resample_every) {
            next = next.resample_equal_arclength(m)?;
        }
        cur = next;

        let max_k = cur.frame().curvature.into_iter().fold(0.0, f64::max);
        let singular = if cur.perimeter() <= 1e-6 * l0 {
            Some(Termination::LengthVanished { t: t_new })
        } else if max_k >= 1.0 / eps {
            Some(Termination::CurvatureBlowup { t: t_new })
        } else {
            None
        };
        recorded_last = recorder.due(steps, t_new) || singular.is_some();
        if recorded_last {
            snapshots.push(cur.clone());
        }
        if let Some(term) = singular {
            break term;
        }
    };
    if !recorded_last {
        snapshots.push(cur);
    }
    Ok(FlowTrajectory {
        snapshots,
        termination,
        steps,
    })
}

/// Normal-angle span of the vertex with the smallest turning angle.
fn worst_turn_range(c: &PlaneCurve, angles: &[f64]) -> (f64, f64) {
    let turns = c.turning_angles();
    let m = turns.len();
    let j = (0..m)
        .min_by(|&a, &b| turns[a].total_cmp(&turns[b]))
        .unwrap_or(0);
    (angles[j], angles[(j + 1) % m])
}
