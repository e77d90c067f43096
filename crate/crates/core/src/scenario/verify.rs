use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{
    run_lagrangian_flow, run_support_flow, sigma_field, support_curve_distance, FlowConfig,
};
use crate::geometry::AngleGrid;
use crate::monitors::{
    check_containment, check_convexity_bound, check_length_identities, check_normal_flow,
    check_simons_sphere, classify_outcome, curvature_evolution_residual, residual_lemma_4_2,
    residual_lemma_4_5, KttCoefficient, MonitorRecord, MonitorReport, OutcomeInputs, Prediction,
    SingularKind, TimeDerivative, FD_STEP, KTT_COEFFICIENT,
};
use crate::radial::{
    classify_regime, closed_form_radius, forced_radial, integrate_radial_ode, RadialGeometry,
};

use super::spec::{Preset, Speed};

pub const SUITES: [&str; 10] = [
    "lemma4",
    "containment",
    "length",
    "convexity",
    "outcome",
    "radial",
    "forced",
    "normal-flow",
    "ktt",
    "cross-solver",
];

/// Expands `all` and rejects unknown names.
pub fn resolve_suites(names: &[String]) -> Result<Vec<&'static str>> {
    let mut out: Vec<&'static str> = Vec::new();
    for name in names {
        if name == "all" {
            for s in SUITES {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
            continue;
        }
        match SUITES.iter().find(|s| **s == name) {
            Some(s) if !out.contains(s) => out.push(s),
            Some(_) => {}
            None => {
                return Err(Error::InvalidConfig(format!(
                    "unknown suite '{name}'; valid suites: {}, all",
                    SUITES.join(", ")
                )))
            }
        }
    }
    if out.is_empty() {
        out.extend(SUITES);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suites: BTreeMap<String, MonitorReport>,
    pub passed: bool,
}

/// Worker count: `HIMCF_THREADS` if set to a positive integer, else one
/// worker per job.
pub fn thread_budget(jobs: usize) -> usize {
    std::env::var("HIMCF_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(jobs)
        .clamp(1, jobs.max(1))
}

/// Runs `jobs` on at most `threads` workers; results keep the input order.
pub fn parallel_map<T: Sync, R: Send>(jobs: &[T], threads: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<R>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..threads.max(1).min(jobs.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let r = f(&jobs[i]);
                *slots[i].lock().unwrap_or_else(|e| e.into_inner()) = Some(r);
            });
        }
    });
    slots
        .into_iter()
        .map(|m| {
            m.into_inner()
                .unwrap_or_else(|e| e.into_inner())
                .expect("every job ran")
        })
        .collect()
}

pub fn cmd_verify(names: &[String]) -> Result<VerifyReport> {
    let suites = resolve_suites(names)?;
    let threads = thread_budget(suites.len());
    let reports = parallel_map(&suites, threads, |s| run_suite(s));
    let suites: BTreeMap<String, MonitorReport> = suites
        .iter()
        .zip(reports)
        .map(|(s, r)| (s.to_string(), r))
        .collect();
    let passed = suites.values().all(MonitorReport::all_passed);
    Ok(VerifyReport { suites, passed })
}

pub fn run_suite(name: &str) -> MonitorReport {
    let result = match name {
        "lemma4" => suite_lemma4(),
        "containment" => suite_containment(),
        "length" => suite_length(),
        "convexity" => suite_convexity(),
        "outcome" => suite_outcome(),
        "radial" => suite_radial(),
        "forced" => suite_forced(),
        "normal-flow" => suite_normal_flow(),
        "ktt" => suite_ktt(),
        "cross-solver" => suite_cross_solver(),
        _ => Err(Error::InvalidConfig(format!("unknown suite '{name}'"))),
    };
    result.unwrap_or_else(|e| {
        MonitorReport::from(vec![MonitorRecord::residual(format!("{name}: {}", e.kind()), 1.0, 0.0)
            .with_note(e.to_string())])
    })
}

fn flow(n: usize, t_end: f64, interval: f64) -> FlowConfig {
    FlowConfig {
        n,
        t_end,
        ..Default::default()
    }
    .with_interval(interval)
}

fn support_run(
    preset: Preset,
    speed: Speed,
    cfg: &FlowConfig,
) -> Result<crate::flow::FlowTrajectory<crate::geometry::SupportState>> {
    let grid = AngleGrid::new(cfg.n)?;
    let s = preset.state(&grid, &speed)?;
    Ok(run_support_flow(s.s(), s.v(), cfg)?.0)
}

fn circle(r0: f64) -> Preset {
    Preset::Circle { r0 }
}

fn ellipse(a: f64, b: f64) -> Preset {
    Preset::Ellipse { a, b }
}

fn constant(c: f64) -> Speed {
    Speed::Constant { c }
}

fn renamed(mut r: MonitorRecord, name: &str) -> MonitorRecord {
    r.name = name.to_string();
    r
}

fn suite_lemma4() -> Result<MonitorReport> {
    let mut worst = [0.0f64; 4];
    for n in [2, 3, 5] {
        for r0 in [0.5, 1.0, 2.0] {
            for r1 in [-0.2, 0.0, 0.5] {
                for t in [0.0, 0.5, 1.0] {
                    let fd = TimeDerivative::FiniteDifference(FD_STEP);
                    let vals = [
                        residual_lemma_4_2(n, r0, r1, t, TimeDerivative::Exact)?,
                        residual_lemma_4_2(n, r0, r1, t, fd)?,
                        residual_lemma_4_5(n, r0, r1, t, TimeDerivative::Exact)?,
                        residual_lemma_4_5(n, r0, r1, t, fd)?,
                    ];
                    for (w, v) in worst.iter_mut().zip(vals) {
                        *w = w.max(v);
                    }
                }
            }
        }
    }
    let mut simons: f64 = 0.0;
    for n in 2..=6 {
        for r in [0.5, 1.0, 3.7, 7.4] {
            simons = simons.max(check_simons_sphere(n, r)?);
        }
    }
    Ok(MonitorReport::from(vec![
        MonitorRecord::residual("lemma_4_2_closed_form", worst[0], 1e-10),
        MonitorRecord::residual("lemma_4_2_finite_difference", worst[1], 1e-6),
        MonitorRecord::residual("lemma_4_5_closed_form", worst[2], 1e-10),
        MonitorRecord::residual("lemma_4_5_finite_difference", worst[3], 1e-6),
        MonitorRecord::residual("simons_sphere", simons, 1e-12),
    ]))
}

fn suite_containment() -> Result<MonitorReport> {
    let cfg = flow(128, 1.0, 0.02);
    let outer = support_run(circle(2.0), constant(0.5), &cfg)?;
    let inner = support_run(circle(1.0), constant(0.3), &cfg)?;
    let a = check_containment(&outer, &inner)?;
    let cfg = flow(128, 2.0, 0.02);
    let outer = support_run(circle(2.0), constant(-1.5), &cfg)?;
    let inner = support_run(ellipse(1.2, 0.8), constant(-1.5), &cfg)?;
    let b = check_containment(&outer, &inner)?;
    Ok(MonitorReport::from(vec![
        renamed(a, "containment_circle_in_circle"),
        renamed(b, "containment_ellipse_in_circle"),
    ]))
}

fn suite_length() -> Result<MonitorReport> {
    let circle_run = support_run(circle(1.0), constant(-0.5), &flow(128, 1.0, 5e-4))?;
    let rep = check_length_identities(&circle_run)?;
    let mut out = MonitorReport::default();
    let first = &rep.records[0];
    out.push(
        MonitorRecord::residual("length_first_identity_circle", first.value, 1e-6)
            .at(first.t, None)
            .with_note("spatially constant speed: time differencing error only"),
    );
    out.push(renamed(rep.records[1].clone(), "length_second_identity_circle"));
    let ellipse_run = support_run(ellipse(1.5, 1.0), constant(-0.8), &flow(128, 1.0, 0.01))?;
    let rep = check_length_identities(&ellipse_run)?;
    out.push(renamed(rep.records[0].clone(), "length_first_identity_ellipse"));
    out.push(renamed(rep.records[1].clone(), "length_second_identity_ellipse"));
    Ok(out)
}

fn suite_convexity() -> Result<MonitorReport> {
    let cfg = flow(128, 1.0, 0.05);
    let shrink = support_run(circle(1.0), constant(-1.0), &cfg)?;
    let grow = support_run(circle(1.0), constant(1.0), &cfg)?;
    let ell = support_run(ellipse(1.2, 1.0), constant(-0.5), &cfg)?;
    let delta_ell = OutcomeInputs::from_state(ell.first())?.delta;
    Ok(MonitorReport::from(vec![
        renamed(check_convexity_bound(&shrink, 1.0), "convexity_shrinking_circle"),
        renamed(check_convexity_bound(&grow, 1.0), "convexity_expanding_circle"),
        renamed(check_convexity_bound(&ell, delta_ell), "convexity_ellipse"),
    ]))
}

fn suite_outcome() -> Result<MonitorReport> {
    let mut out = MonitorReport::default();
    let cases = [
        ("outcome_circle_fast_shrink", circle(1.0), -2.0, 1.0),
        ("outcome_ellipse_expanding", ellipse(1.5, 1.0), 1.0, 2.0),
        ("outcome_circle_slow_shrink", circle(1.0), -0.5, 1.0),
    ];
    for (name, preset, f, t_end) in cases {
        let traj = support_run(preset, constant(f), &flow(128, t_end, t_end / 20.0))?;
        let inputs = OutcomeInputs::from_state(traj.first())?;
        let outcome = classify_outcome(&traj, &inputs);
        out.push(renamed(outcome.record.clone(), name).with_note(outcome.label.clone()));
        if let Prediction::FiniteTime { .. } = outcome.prediction {
            let collapse = outcome.singular_kind == Some(SingularKind::PointCollapse);
            out.push(MonitorRecord::residual(
                format!("{name}_point_collapse"),
                if collapse { 0.0 } else { 1.0 },
                0.0,
            ));
        }
    }
    Ok(out)
}

fn suite_radial() -> Result<MonitorReport> {
    let mut worst: f64 = 0.0;
    for n in [2usize, 3, 5] {
        let g = RadialGeometry::sphere(n)?;
        for r0 in [0.5, 1.0, 2.0] {
            for r1 in [-2.0, -r0 / (n as f64).sqrt(), 0.0, 1.0] {
                let regime = classify_regime(g, r0, r1)?;
                let t_end = regime.t_max.map_or(2.0, |t| (0.9 * t).min(2.0));
                let traj = integrate_radial_ode(g, r0, r1, 1e-3, t_end)?;
                for s in &traj.samples {
                    let err = (s.r - closed_form_radius(g, r0, r1, s.t)).abs() / r0;
                    worst = worst.max(err);
                }
            }
        }
    }
    let cyl = classify_regime(RadialGeometry::Cylinder, 1.0, -2.0)?;
    let flagged = if cyl.flags.is_empty() { 1.0 } else { 0.0 };
    Ok(MonitorReport::from(vec![
        MonitorRecord::residual("radial_closed_form_relative", worst, 1e-8),
        MonitorRecord::residual("cylinder_half_factor_flag", flagged, 0.0),
    ]))
}

fn suite_forced() -> Result<MonitorReport> {
    let mut out = MonitorReport::default();
    let forcing = |t: f64| 0.5 * t.sin();
    for (label, g) in [
        ("circle", RadialGeometry::Circle),
        ("sphere2", RadialGeometry::sphere(2)?),
        ("cylinder", RadialGeometry::Cylinder),
    ] {
        let rep = forced_radial(g, &forcing, -0.5, 0.5, 1.0, 0.2, 1e-3, 2.0)?;
        out.push(MonitorRecord::margin(
            format!("forced_{label}_lower"),
            rep.margin_lower,
            rep.tolerance,
        ));
        out.push(MonitorRecord::margin(
            format!("forced_{label}_upper"),
            rep.margin_upper,
            rep.tolerance,
        ));
    }
    Ok(out)
}

fn suite_normal_flow() -> Result<MonitorReport> {
    let mut out = MonitorReport::default();
    for (name, preset, f, t_end) in [
        ("normal_flow_circle", circle(1.0), -1.0, 1.0),
        ("normal_flow_ellipse", ellipse(2.0, 1.0), 0.5, 0.5),
    ] {
        let c0 = preset.curve(256, &constant(f))?;
        let traj = run_lagrangian_flow(&c0, c0.sigma(), &flow(128, t_end, t_end / 20.0))?;
        out.push(renamed(check_normal_flow(&traj), name));
    }
    Ok(out)
}

fn suite_ktt() -> Result<MonitorReport> {
    let preset = Preset::Fourier {
        cos: vec![0.5, 0.0, 0.05],
        sin: vec![],
    };
    let speed = Speed::Fourier {
        cos: vec![-0.3, 0.05],
        sin: vec![0.0, 0.0, 0.04],
    };
    let traj = support_run(preset, speed, &flow(64, 0.05, 1e-3))?;
    let good = curvature_evolution_residual(&traj, KTT_COEFFICIENT, 1e-4)?;
    let alt = curvature_evolution_residual(&traj, KttCoefficient { c: 2.0, p: 3 }, 1e-4)?;
    let circle_run = support_run(circle(1.0), constant(-0.5), &flow(64, 0.5, 1e-3))?;
    let on_circle = curvature_evolution_residual(&circle_run, KTT_COEFFICIENT, 1e-4)?;
    Ok(MonitorReport::from(vec![
        renamed(good, "curvature_evolution_perturbed_circle"),
        renamed(on_circle, "curvature_evolution_circle"),
        MonitorRecord::margin("curvature_evolution_alternative_excluded", alt.value - 1e-2, 0.0)
            .with_note(format!("relative residual with k_theta^2/k^3: {}", alt.value)),
    ]))
}

fn suite_cross_solver() -> Result<MonitorReport> {
    let cfg = flow(128, 0.5, 0.05);
    let preset = ellipse(2.0, 1.0);
    let speed = constant(0.5);
    let support = support_run(preset.clone(), speed.clone(), &cfg)?;
    let c0 = preset.curve(256, &speed)?;
    let lag = run_lagrangian_flow(&c0, c0.sigma(), &cfg)?;
    let grid = AngleGrid::new(cfg.n)?;
    let (mut dist, mut dsig) = (0.0f64, 0.0f64);
    for s in &support.snapshots {
        let Some(c) = lag.at_time(s.t()) else {
            return Err(Error::SnapshotMismatch(format!("no vertex snapshot at t = {}", s.t())));
        };
        dist = dist.max(support_curve_distance(s, c));
        let a = sigma_field(&support, s.t(), &grid)?;
        let b = sigma_field(&lag, s.t(), &grid)?;
        dsig = a.iter().zip(&b).fold(dsig, |m, (x, y)| m.max((x - y).abs()));
    }
    Ok(MonitorReport::from(vec![
        MonitorRecord::residual("cross_solver_hausdorff", dist, 1e-3),
        MonitorRecord::residual("cross_solver_sigma", dsig, 1e-3),
    ]))
}
