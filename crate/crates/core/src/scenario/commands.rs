use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use super::output::{render_svg, to_sorted_json, write_atomic, Csv, Outline};
use super::spec::{default_interval, ContainmentSpec, CurveSpec, Forcing, RadialSpec};
use crate::error::{Error, Result};
use crate::flow::{
    run_lagrangian_flow, run_support_flow, support_curve_distance, FlowConfig, FlowTrajectory,
    Termination,
};
use crate::geometry::{support_to_curve, AngleGrid, SupportState};
use crate::monitors::{
    check_containment, check_convexity_bound, check_length_identities, check_normal_flow,
    classify_outcome, MonitorRecord, MonitorReport, OutcomeInputs,
};
use crate::radial::{
    classify_regime, closed_form_radius, forced_radial, integrate_radial_ode, RadialTermination,
    RegimeReport,
};

/// Machine-readable result of one command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub command: String,
    pub termination: String,
    pub termination_time: Option<f64>,
    pub regime: Option<RegimeReport>,
    pub outcome: Option<String>,
    pub final_length: Option<f64>,
    pub min_curvature: Option<f64>,
    pub max_curvature: Option<f64>,
    pub monitors: MonitorReport,
    /// Every monitor record passed (flagged records count as passed).
    pub passed: bool,
    /// Notes on quantities that differ from their commonly printed form, and
    /// flagged monitor observations.
    pub flags: Vec<String>,
    pub metrics: BTreeMap<String, f64>,
}

impl RunSummary {
    fn new(command: &str, termination: String, monitors: MonitorReport) -> Self {
        let flags = monitors
            .records
            .iter()
            .filter(|r| r.status == crate::monitors::Status::Flagged)
            .map(|r| format!("{}: {}", r.name, r.note.clone().unwrap_or_default()))
            .collect();
        Self {
            command: command.to_string(),
            termination,
            termination_time: None,
            regime: None,
            outcome: None,
            final_length: None,
            min_curvature: None,
            max_curvature: None,
            passed: monitors.all_passed(),
            monitors,
            flags,
            metrics: BTreeMap::new(),
        }
    }
}

/// A command's summary and the files it produces, keyed by file name.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub summary: RunSummary,
    pub files: BTreeMap<String, String>,
}

impl RunOutput {
    /// Writes every file plus `<command>_summary.json` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        let io = |e: std::io::Error| Error::InvalidConfig(format!("cannot write output: {e}"));
        for (name, body) in &self.files {
            write_atomic(&dir.join(name), body.as_bytes()).map_err(io)?;
        }
        let json = self.summary_json()?;
        write_atomic(&dir.join(format!("{}_summary.json", self.summary.command)), json.as_bytes())
            .map_err(io)
    }

    pub fn summary_json(&self) -> Result<String> {
        to_sorted_json(&self.summary).map_err(|e| Error::InvalidConfig(e.to_string()))
    }
}

pub fn cmd_radial(spec: &RadialSpec) -> Result<RunOutput> {
    spec.forcing.validate()?;
    let mut files = BTreeMap::new();
    if spec.forcing == Forcing::None {
        let regime = classify_regime(spec.geometry, spec.r0, spec.r1)?;
        let traj = integrate_radial_ode(spec.geometry, spec.r0, spec.r1, spec.dt, spec.t_end)?;
        let mut csv = Csv::new(&["t", "r_closed", "r_numeric", "abs_err"]);
        let mut max_err: f64 = 0.0;
        for s in &traj.samples {
            let exact = closed_form_radius(spec.geometry, spec.r0, spec.r1, s.t);
            let err = (exact - s.r).abs();
            max_err = max_err.max(err);
            csv.row(&[s.t, exact, s.r, err]);
        }
        files.insert("radial.csv".into(), csv.into_string());
        let tol = 1e-8 * spec.r0;
        let monitors = MonitorReport::from(vec![MonitorRecord::residual(
            "radial_closed_form",
            max_err,
            tol,
        )]);
        let (termination, t_term) = match traj.termination {
            RadialTermination::HorizonReached => ("HorizonReached".to_string(), None),
            RadialTermination::ExtinctionReached { t } => ("ExtinctionReached".to_string(), Some(t)),
        };
        let mut summary = RunSummary::new("radial", termination, monitors);
        summary.termination_time = t_term;
        summary.flags.extend(regime.flags.iter().cloned());
        summary.outcome = Some(format!("{:?}", regime.regime));
        summary.metrics.insert("max_abs_err".into(), max_err);
        summary.metrics.insert("final_radius".into(), traj.last().r);
        if let Some(t_max) = regime.t_max {
            summary.metrics.insert("t_max".into(), t_max);
        }
        summary.regime = Some(regime);
        Ok(RunOutput { summary, files })
    } else {
        let (c_lo, c_hi) = spec.forcing.bounds();
        let forcing = spec.forcing.clone();
        let rep = forced_radial(
            spec.geometry,
            &move |t| forcing.at(t),
            c_lo,
            c_hi,
            spec.r0,
            spec.r1,
            spec.dt,
            spec.t_end,
        )?;
        let mut csv = Csv::new(&["t", "r_numeric", "r_lo", "r_hi"]);
        for k in 0..rep.times.len() {
            csv.row(&[rep.times[k], rep.r[k], rep.r_lower[k], rep.r_upper[k]]);
        }
        files.insert("radial.csv".into(), csv.into_string());
        let monitors = MonitorReport::from(vec![
            MonitorRecord::margin("bracket_lower", rep.margin_lower, rep.tolerance),
            MonitorRecord::margin("bracket_upper", rep.margin_upper, rep.tolerance),
        ]);
        let t_last = *rep.times.last().unwrap_or(&0.0);
        let reached = t_last >= spec.t_end - 1e-12 * spec.t_end;
        let termination = if reached { "HorizonReached" } else { "ExtinctionReached" };
        let mut summary = RunSummary::new("radial", termination.into(), monitors);
        if !reached {
            summary.termination_time = Some(t_last);
        }
        summary.metrics.insert("c_lo".into(), c_lo);
        summary.metrics.insert("c_hi".into(), c_hi);
        summary.metrics.insert("final_radius".into(), *rep.r.last().unwrap_or(&spec.r0));
        Ok(RunOutput { summary, files })
    }
}

fn scheduled(flow: &FlowConfig) -> FlowConfig {
    let mut cfg = flow.clone();
    if cfg.record_interval.is_none() {
        cfg.record_interval = Some(default_interval(cfg.t_end));
    }
    cfg
}

fn curvature_extremes(s: &SupportState) -> (f64, f64) {
    s.radius_of_curvature()
        .map(|rho| {
            rho.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
                (lo.min(1.0 / r), hi.max(1.0 / r))
            })
        })
        .unwrap_or((f64::NAN, f64::NAN))
}

fn support_csv(traj: &FlowTrajectory<SupportState>) -> String {
    let mut csv = Csv::new(&["t", "theta", "S", "V", "k"]);
    for s in &traj.snapshots {
        let rho = s.radius_of_curvature().unwrap_or_else(|_| vec![f64::NAN; s.s().len()]);
        for (j, th) in s.grid().thetas().iter().enumerate() {
            csv.row(&[s.t(), *th, s.s()[j], s.v()[j], 1.0 / rho[j]]);
        }
    }
    csv.into_string()
}

fn termination_fields(term: &Termination) -> (String, Option<f64>) {
    (term.name().to_string(), term.singular_time())
}

pub fn cmd_curve(spec: &CurveSpec) -> Result<RunOutput> {
    spec.speed.validate()?;
    let cfg = scheduled(&spec.flow);
    cfg.validate()?;
    let grid = AngleGrid::new(cfg.n)?;
    let initial = spec.preset.state(&grid, &spec.speed)?;
    let (traj, mut monitors) = run_support_flow(initial.s(), initial.v(), &cfg)?;

    let inputs = OutcomeInputs::from_state(traj.first())?;
    let outcome = classify_outcome(&traj, &inputs);
    monitors.push(check_convexity_bound(&traj, inputs.delta));
    monitors.push(outcome.record.clone());
    let mut flags = Vec::new();
    match check_length_identities(&traj) {
        Ok(rep) => monitors.extend(rep),
        Err(e) => flags.push(format!("length identities skipped: {e}")),
    }

    let mut metrics = BTreeMap::new();
    let mut outlines = Vec::new();
    let picks = [0, traj.snapshots.len() / 2, traj.snapshots.len() - 1];
    let colours = ["#1f77b4", "#7f7f7f", "#d62728"];
    for (&i, colour) in picks.iter().zip(colours) {
        let s = &traj.snapshots[i];
        if let Ok(c) = support_to_curve(s) {
            outlines.push(Outline {
                points: c.points().to_vec(),
                stroke: colour,
                dashed: false,
                label: format!("support solver t={}", s.t()),
            });
        }
    }

    let mut files = BTreeMap::new();
    if spec.both_solvers {
        let curve0 = spec.preset.curve(spec.vertices, &spec.speed)?;
        let f = curve0.sigma().to_vec();
        let lag = run_lagrangian_flow(&curve0, &f, &cfg)?;
        monitors.push(check_normal_flow(&lag));
        let t_sing = [traj.termination.singular_time(), lag.termination.singular_time()]
            .into_iter()
            .flatten()
            .fold(f64::INFINITY, f64::min);
        let window = 0.8 * t_sing.min(cfg.t_end);
        let (mut worst, mut at, mut last) = (0.0f64, 0.0, f64::NAN);
        for s in &traj.snapshots {
            if let Some(c) = lag.at_time(s.t()) {
                let d = support_curve_distance(s, c);
                last = d;
                metrics.insert("hausdorff_last_time".into(), s.t());
                if s.t() <= window + 1e-12 && d > worst {
                    worst = d;
                    at = s.t();
                }
            }
        }
        metrics.insert("hausdorff_last".into(), last);
        metrics.insert("hausdorff_max".into(), worst);
        metrics.insert("hausdorff_window_end".into(), window);
        monitors.push(
            MonitorRecord::residual("cross_solver_hausdorff", worst, 1e-3)
                .at(Some(at), None)
                .with_note(format!("compared for t <= {window}")),
        );
        let mut csv = Csv::new(&["t", "index", "x", "y", "sigma"]);
        for c in &lag.snapshots {
            for (i, (p, s)) in c.points().iter().zip(c.sigma()).enumerate() {
                csv.row(&[c.t(), i as f64, p[0], p[1], *s]);
            }
        }
        files.insert("curve_lagrangian.csv".into(), csv.into_string());
        outlines.push(Outline {
            points: lag.last().points().to_vec(),
            stroke: "#2ca02c",
            dashed: true,
            label: format!("vertex solver t={}", lag.last().t()),
        });
    }
    files.insert("curve.csv".into(), support_csv(&traj));
    files.insert("curve.svg".into(), render_svg(&outlines));

    let (termination, t_term) = termination_fields(&traj.termination);
    let mut summary = RunSummary::new("curve", termination, monitors);
    summary.flags.extend(flags);
    summary.termination_time = t_term;
    summary.outcome = Some(outcome.label.clone());
    let last = traj.last();
    summary.final_length = Some(grid.integrate(last.s()));
    let (k_lo, k_hi) = curvature_extremes(last);
    summary.min_curvature = Some(k_lo);
    summary.max_curvature = Some(k_hi);
    if let Some(t_star) = inputs.t_star {
        metrics.insert("t_star".into(), t_star);
    }
    metrics.insert("outcome_agrees".into(), if outcome.agrees { 1.0 } else { 0.0 });
    metrics.insert("final_time".into(), traj.final_time());
    summary.metrics = metrics;
    Ok(RunOutput { summary, files })
}

pub fn cmd_containment(spec: &ContainmentSpec) -> Result<RunOutput> {
    spec.outer.speed.validate()?;
    spec.inner.speed.validate()?;
    let cfg = scheduled(&spec.flow);
    cfg.validate()?;
    let grid = AngleGrid::new(cfg.n)?;
    let outer0 = spec.outer.preset.state(&grid, &spec.outer.speed)?;
    let inner0 = spec.inner.preset.state(&grid, &spec.inner.speed)?;
    let (outer, _) = run_support_flow(outer0.s(), outer0.v(), &cfg)?;
    let (inner, _) = run_support_flow(inner0.s(), inner0.v(), &cfg)?;
    let record = check_containment(&outer, &inner)?;

    let mut csv = Csv::new(&["t", "theta", "S_outer", "S_inner", "margin"]);
    for (a, b) in outer.snapshots.iter().zip(&inner.snapshots) {
        if (a.t() - b.t()).abs() > 1e-12 * a.t().abs().max(1.0) {
            break;
        }
        let (ha, hb) = (a.absolute_support(), b.absolute_support());
        for (j, th) in grid.thetas().iter().enumerate() {
            csv.row(&[a.t(), *th, ha[j], hb[j], ha[j] - hb[j]]);
        }
    }
    let mut files = BTreeMap::new();
    files.insert("containment.csv".into(), csv.into_string());

    let termination = format!(
        "outer: {}; inner: {}",
        outer.termination.name(),
        inner.termination.name()
    );
    let mut summary = RunSummary::new("containment", termination, MonitorReport::from(vec![record]));
    summary.termination_time = [outer.termination.singular_time(), inner.termination.singular_time()]
        .into_iter()
        .flatten()
        .reduce(f64::min);
    summary.metrics.insert("outer_final_time".into(), outer.final_time());
    summary.metrics.insert("inner_final_time".into(), inner.final_time());
    Ok(RunOutput { summary, files })
}
