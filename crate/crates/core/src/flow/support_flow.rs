//! Hyperbolic PDE for the support function on the normal-angle circle,
//!
//! `S_ττ = S_θτ² / (S_θθ + S) + (S_θθ + S)`,
//!
//! written as the first-order system `S' = V`, `V' = V_θ²/ρ + ρ` with
//! `ρ = S_θθ + S = 1/k`, discretised spectrally in θ and advanced with the
//! classical fourth-order Runge–Kutta scheme.
//!
//! The quasilinear operator has coefficients `a = k²(1/k² − S_θτ²)`,
//! `b = k S_θτ`, `c = −1` with `b² − ac = 1`, so its characteristic speeds in
//! θ are `k S_θτ ± 1` and the step is bounded by
//! `dt ≤ cfl · Δθ / (max|k V_θ| + 1)`.

use super::config::{clip_step, FlowConfig, Recorder, TimeStep, MAX_CFL_SAFETY};
use super::trajectory::{FlowTrajectory, Termination};
use crate::error::{Error, Result};
use crate::geometry::grid::AngleGrid;
use crate::geometry::support::{check_floor, default_floor};
use crate::geometry::{Order, SupportState};
use crate::monitors::report::{MonitorRecord, MonitorReport};

/// Right-hand side evaluation and the quantities the stepper needs from it.
struct Rhs {
    accel: Vec<f64>,
    /// `max_j |k V_θ|`
    max_speed: f64,
    rho: Vec<f64>,
    /// `max_j |ρ_τ / ρ|` with `ρ_τ = V_θθ + V`
    rho_rate: f64,
}

fn evaluate(grid: &AngleGrid, s: &[f64], v: &[f64], eps: f64, t: f64) -> Result<Rhs> {
    let spec = grid.spectral();
    let s_tt = spec.derivative_unchecked(s, Order::Second);
    let rho: Vec<f64> = s_tt.iter().zip(s).map(|(a, b)| a + b).collect();
    check_floor(grid, &rho, eps, t)?;
    let (v_th, v_tt) = spec.first_and_second(v);
    let rho_rate = rho
        .iter()
        .zip(v_tt.iter().zip(v))
        .map(|(r, (a, b))| ((a + b) / r).abs())
        .fold(0.0, f64::max);
    let mut max_speed: f64 = 0.0;
    let accel = rho
        .iter()
        .zip(&v_th)
        .map(|(&r, &w)| {
            max_speed = max_speed.max((w / r).abs());
            w * w / r + r
        })
        .collect();
    Ok(Rhs {
        accel,
        max_speed,
        rho,
        rho_rate,
    })
}

/// Acceleration `S_ττ = V_θ²/(S_θθ + S) + (S_θθ + S)` at every sample.
pub fn support_rhs(s: &SupportState) -> Result<Vec<f64>> {
    Ok(evaluate(s.grid(), s.s(), s.v(), s.eps_convex(), s.t())?.accel)
}

/// `Δθ / (max|k V_θ| + 1)`: the CFL bound for unit safety factor.
pub fn cfl_unit_bound(s: &SupportState) -> Result<f64> {
    let rhs = evaluate(s.grid(), s.s(), s.v(), s.eps_convex(), s.t())?;
    Ok(s.grid().spacing() / (rhs.max_speed + 1.0))
}

fn rk4(
    grid: &AngleGrid,
    s: &[f64],
    v: &[f64],
    first: &[f64],
    t: f64,
    h: f64,
    eps: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let axpy = |x: &[f64], a: f64, y: &[f64]| -> Vec<f64> {
        x.iter().zip(y).map(|(x, y)| x + a * y).collect()
    };
    let k1s = v;
    let k1v = first;
    let (s2, v2) = (axpy(s, 0.5 * h, k1s), axpy(v, 0.5 * h, k1v));
    let k2v = evaluate(grid, &s2, &v2, eps, t + 0.5 * h)?.accel;
    let (s3, v3) = (axpy(s, 0.5 * h, &v2), axpy(v, 0.5 * h, &k2v));
    let k3v = evaluate(grid, &s3, &v3, eps, t + 0.5 * h)?.accel;
    let (s4, v4) = (axpy(s, h, &v3), axpy(v, h, &k3v));
    let k4v = evaluate(grid, &s4, &v4, eps, t + h)?.accel;
    let n = s.len();
    let mut s_new = Vec::with_capacity(n);
    let mut v_new = Vec::with_capacity(n);
    for j in 0..n {
        s_new.push(s[j] + h / 6.0 * (k1s[j] + 2.0 * v2[j] + 2.0 * v3[j] + v4[j]));
        v_new.push(v[j] + h / 6.0 * (k1v[j] + 2.0 * k2v[j] + 2.0 * k3v[j] + k4v[j]));
    }
    if s_new.iter().chain(&v_new).any(|x| !x.is_finite()) {
        return Err(Error::NonFinite {
            what: "support step",
            index: 0,
        });
    }
    check_floor(grid, &evaluate_rho(grid, &s_new), eps, t + h)?;
    Ok((s_new, v_new))
}

fn evaluate_rho(grid: &AngleGrid, s: &[f64]) -> Vec<f64> {
    grid.spectral()
        .derivative_unchecked(s, Order::Second)
        .iter()
        .zip(s)
        .map(|(a, b)| a + b)
        .collect()
}

/// One fourth-order step of size `dt`.
///
/// Fails with `CflViolation` when `dt` exceeds the stability bound at the
/// largest admissible safety factor, and with `ConvexityLost` when any stage
/// leaves the convex cone.
pub fn step_support(s: &SupportState, dt: f64) -> Result<SupportState> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidConfig(format!("time step must be positive, got {dt}")));
    }
    let grid = s.grid();
    let rhs = evaluate(grid, s.s(), s.v(), s.eps_convex(), s.t())?;
    let bound = MAX_CFL_SAFETY * grid.spacing() / (rhs.max_speed + 1.0);
    if dt > bound {
        return Err(Error::CflViolation { dt, bound });
    }
    let (s_new, v_new) = rk4(grid, s.s(), s.v(), &rhs.accel, s.t(), dt, s.eps_convex())?;
    Ok(SupportState::from_parts_unchecked(
        grid.clone(),
        s_new,
        v_new,
        s.t() + dt,
        s.center(),
        s.eps_convex(),
    ))
}

/// Runs the support flow from samples `S(θ_j, 0)` and `S_τ(θ_j, 0)` on the
/// grid of size `cfg.n`, centred at the origin.
pub fn run_support_flow(
    s0: &[f64],
    v0: &[f64],
    cfg: &FlowConfig,
) -> Result<(FlowTrajectory<SupportState>, MonitorReport)> {
    cfg.validate()?;
    let grid = AngleGrid::new(cfg.n)?;
    let eps = cfg.eps_convex.unwrap_or_else(|| default_floor(s0));
    let initial = SupportState::with_floor(grid, s0.to_vec(), v0.to_vec(), 0.0, [0.0, 0.0], eps)?;
    run_support_flow_from(initial, cfg)
}

/// Runs the support flow from a prepared state (its grid, centre and
/// convexity floor are kept; `cfg.n` and `cfg.eps_convex` are ignored).
pub fn run_support_flow_from(
    initial: SupportState,
    cfg: &FlowConfig,
) -> Result<(FlowTrajectory<SupportState>, MonitorReport)> {
    cfg.validate()?;
    initial.radius_of_curvature()?;
    let grid = initial.grid().clone();
    let eps = initial.eps_convex();
    let center = initial.center();
    let dtheta = grid.spacing();
    let l0 = grid.integrate(initial.s());
    let min_h = 1e-13 * cfg.t_end.max(1.0);

    let mut recorder = Recorder::new(cfg);
    let mut snapshots = vec![initial.clone()];
    let (mut s, mut v, mut t) = (initial.s().to_vec(), initial.v().to_vec(), initial.t());
    let mut steps = 0usize;
    let mut cap: Option<f64> = None;
    let mut worst_cfl: f64 = 0.0;
    let mut min_rho = f64::INFINITY;
    let mut recorded_last = true;

    let termination = loop {
        if t >= cfg.t_end - 1e-12 * cfg.t_end {
            break Termination::HorizonReached;
        }
        if steps >= cfg.max_steps {
            return Err(Error::InvalidConfig(format!(
                "step budget of {} exhausted at t = {t}",
                cfg.max_steps
            )));
        }
        let rhs = evaluate(&grid, &s, &v, eps, t)?;
        min_rho = min_rho.min(rhs.rho.iter().cloned().fold(f64::INFINITY, f64::min));
        let unit = dtheta / (rhs.max_speed + 1.0);
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
            // the radius of curvature may change by at most a fraction of
            // itself per step, so extinction is approached geometrically
            TimeStep::Adaptive { cfl_safety } => cfl_safety * unit.min(1.0 / rhs.rho_rate),
        };
        if let Some(c) = cap {
            dt = dt.min(c);
        }
        let mark = recorder.next_time();
        let mut h = clip_step(dt, t, cfg.t_end, mark);
        let accepted = loop {
            match rk4(&grid, &s, &v, &rhs.accel, t, h, eps) {
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
        let (s_new, v_new) = match accepted {
            Ok(next) => next,
            Err(Error::ConvexityLost {
                theta_lo, theta_hi, ..
            }) => {
                break Termination::ConvexityLost {
                    t,
                    theta_lo,
                    theta_hi,
                }
            }
            Err(_) => {
                break Termination::ConvexityLost {
                    t,
                    theta_lo: 0.0,
                    theta_hi: grid.theta(grid.len() - 1),
                }
            }
        };
        if let Some(c) = cap {
            cap = Some(2.0 * c);
        }
        worst_cfl = worst_cfl.max(h / unit);
        // land exactly on recording marks and on the horizon
        t = if mark.is_some_and(|m| (t + h - m).abs() <= 1e-12 * m.max(1.0)) {
            mark.unwrap_or(t + h)
        } else if (t + h - cfg.t_end).abs() <= 1e-12 * cfg.t_end {
            cfg.t_end
        } else {
            t + h
        };
        s = s_new;
        v = v_new;
        steps += 1;

        let rho = evaluate_rho(&grid, &s);
        let max_k = rho.iter().map(|r| 1.0 / r).fold(0.0, f64::max);
        let length = grid.integrate(&s);
        let singular = if length <= 1e-6 * l0 {
            Some(Termination::LengthVanished { t })
        } else if max_k >= 1.0 / eps {
            Some(Termination::CurvatureBlowup { t })
        } else {
            None
        };
        recorded_last = recorder.due(steps, t) || singular.is_some();
        if recorded_last {
            snapshots.push(SupportState::from_parts_unchecked(
                grid.clone(),
                s.clone(),
                v.clone(),
                t,
                center,
                eps,
            ));
        }
        if let Some(term) = singular {
            break term;
        }
    };
    if !recorded_last {
        snapshots.push(SupportState::from_parts_unchecked(grid, s, v, t, center, eps));
    }

    let mut report = MonitorReport::default();
    report.push(
        MonitorRecord::residual("cfl_ratio", worst_cfl, MAX_CFL_SAFETY)
            .with_note("max over steps of dt·(max|k V_θ| + 1)/Δθ"),
    );
    report.push(
        MonitorRecord::margin("convexity_floor", min_rho - eps, 0.0)
            .with_note("min over accepted steps of (S_θθ + S) − eps_convex"),
    );
    Ok((
        FlowTrajectory {
            snapshots,
            termination,
            steps,
        },
        report,
    ))
}
