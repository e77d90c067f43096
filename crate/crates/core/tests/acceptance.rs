//! Acceptance gate: one line per criterion, nonzero exit if any fails.

#![allow(clippy::type_complexity)]

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use himcf::flow::{
    run_lagrangian_flow, run_support_flow, sigma_field, support_curve_distance, FlowConfig,
    Termination,
};
use himcf::geometry::{AngleGrid, PlaneCurve};
use himcf::monitors::{
    check_containment, check_length_identities, check_normal_flow, length_series,
    residual_lemma_4_2, residual_lemma_4_5, check_simons_sphere, OutcomeInputs, Status,
    TimeDerivative,
};
use himcf::radial::{classify_regime, forced_radial, integrate_radial_ode, RadialGeometry, Regime};
use himcf::scenario::{Preset, Speed};

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// `λ` written out per geometry, independent of the library.
fn rate(g: RadialGeometry) -> f64 {
    match g {
        RadialGeometry::SphereN { n } => 1.0 / (n as f64).sqrt(),
        RadialGeometry::Cylinder | RadialGeometry::Circle => 1.0,
    }
}

fn exact_r(lam: f64, r0: f64, r1: f64, t: f64) -> f64 {
    0.5 * (r0 + r1 / lam) * (lam * t).exp() + 0.5 * (r0 - r1 / lam) * (-lam * t).exp()
}

/// First zero of the closed form by scanning and bisection, `None` if the
/// radius stays positive up to `t = 60/λ`.
fn bisection_extinction(lam: f64, r0: f64, r1: f64) -> Option<f64> {
    let h = 1e-3 / lam;
    let mut t = 0.0;
    while t < 60.0 / lam {
        if exact_r(lam, r0, r1, t + h) <= 0.0 {
            let (mut lo, mut hi) = (t, t + h);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if exact_r(lam, r0, r1, mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        t += h;
    }
    None
}

fn criterion_1() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    let mut cases = 0;
    for n in [2usize, 3, 5] {
        let g = RadialGeometry::SphereN { n };
        let lam = rate(g);
        for r0 in [0.5, 1.0, 2.0] {
            for r1 in [-2.0, -r0 / (n as f64).sqrt(), 0.0, 1.0] {
                let start = Instant::now();
                let t_max = bisection_extinction(lam, r0, r1);
                let t_end = t_max.map_or(2.0, |t| (0.9 * t).min(2.0));
                let traj = integrate_radial_ode(g, r0, r1, 1e-3, t_end).map_err(e2s)?;
                ensure(
                    (traj.last().t - t_end).abs() < 1e-9,
                    || format!("n={n} r0={r0} r1={r1}: run stopped at {}", traj.last().t),
                )?;
                for s in &traj.samples {
                    worst = worst.max((s.r - exact_r(lam, r0, r1, s.t)).abs() / r0);
                }
                slowest = slowest.max(start.elapsed());
                cases += 1;
            }
        }
    }
    ensure(worst <= 1e-8, || format!("max relative error {worst:e} > 1e-8"))?;
    ensure(slowest < Duration::from_secs(1), || format!("slowest case {slowest:?}"))?;
    Ok(format!("{cases} cases, max |r - r_exact|/r0 = {worst:.2e}, slowest {slowest:.2?}"))
}

fn criterion_2() -> Verdict {
    let mut worst_t: f64 = 0.0;
    let mut points = 0;
    let mut finite = 0;
    let geometries = [
        RadialGeometry::Circle,
        RadialGeometry::Cylinder,
        RadialGeometry::SphereN { n: 2 },
        RadialGeometry::SphereN { n: 5 },
    ];
    for g in geometries {
        let lam = rate(g);
        for i in 0..10 {
            for j in 0..10 {
                let r0 = 0.3 + 0.29 * i as f64;
                // offset keeps every point off the r0 + r1/λ = 0 boundary
                let r1 = -3.07 + 0.53 * j as f64;
                let rep = classify_regime(g, r0, r1).map_err(e2s)?;
                let oracle = bisection_extinction(lam, r0, r1);
                let predicted = r0 + r1 / lam < 0.0;
                ensure(oracle.is_some() == predicted, || {
                    format!("{g:?} r0={r0} r1={r1}: oracle {oracle:?} vs sign rule")
                })?;
                ensure(
                    (rep.regime == Regime::ConvergesToPointFiniteTime) == predicted,
                    || format!("{g:?} r0={r0} r1={r1}: regime {:?}", rep.regime),
                )?;
                if let Some(t) = oracle {
                    let got = rep.t_max.ok_or("missing T_max")?;
                    worst_t = worst_t.max((got - t).abs());
                    finite += 1;
                    if g == RadialGeometry::Cylinder {
                        ensure(!rep.flags.is_empty(), || {
                            format!("cylinder r0={r0} r1={r1}: no half-factor flag")
                        })?;
                    }
                }
                points += 1;
            }
        }
    }
    ensure(worst_t <= 1e-6, || format!("T_max error {worst_t:e} > 1e-6"))?;
    Ok(format!(
        "{points} points over 4 geometries ({finite} finite-time), max |T_max - bisection| = {worst_t:.2e}, cylinder flagged"
    ))
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let cfg = FlowConfig::default();
    let (traj, _) = run_support_flow(&[1.0; 128], &[-1.0; 128], &cfg).map_err(e2s)?;
    ensure(traj.termination == Termination::HorizonReached, || {
        format!("termination {:?}", traj.termination)
    })?;
    let target = (-1.0f64).exp();
    let err = traj.last().s().iter().map(|s| (s - target).abs()).fold(0.0, f64::max);
    ensure(err <= 1e-5, || format!("max |S - e^-1| = {err:e}"))?;
    let (traj, _) = run_support_flow(&[1.0; 128], &[-2.0; 128], &cfg).map_err(e2s)?;
    let t = traj.termination.singular_time().ok_or("fast circle did not terminate")?;
    let dt = (t - 0.5 * 3f64.ln()).abs();
    ensure(dt <= 1e-2, || format!("termination at {t}, off by {dt:e}"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("runtime {elapsed:?}"))?;
    Ok(format!(
        "max |S(1) - e^-1| = {err:.2e}, {} at t = {t:.6} (|dt| = {dt:.1e}), {elapsed:.2?}",
        traj.termination.name()
    ))
}

fn ellipse_support(a: f64, b: f64, grid: &AngleGrid) -> Vec<f64> {
    grid.sample(|t| (a * a * t.cos().powi(2) + b * b * t.sin().powi(2)).sqrt())
}

/// Ellipse vertices at equal parameter spacing, built without the library's
/// support-to-curve conversion.
fn ellipse_vertices(a: f64, b: f64, m: usize, speed: f64) -> PlaneCurve {
    let pts = (0..m)
        .map(|i| {
            let u = std::f64::consts::TAU * i as f64 / m as f64;
            [a * u.cos(), b * u.sin()]
        })
        .collect();
    PlaneCurve::new(pts, vec![speed; m], 0.0).unwrap()
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let cfg = FlowConfig {
        n: 128,
        t_end: 0.5,
        ..Default::default()
    }
    .with_interval(0.05);
    let grid = AngleGrid::new(128).map_err(e2s)?;
    let (support, _) =
        run_support_flow(&ellipse_support(2.0, 1.0, &grid), &[0.5; 128], &cfg).map_err(e2s)?;
    let c0 = ellipse_vertices(2.0, 1.0, 256, 0.5);
    let lag = run_lagrangian_flow(&c0, &[0.5; 256], &cfg).map_err(e2s)?;
    ensure(
        support.termination == Termination::HorizonReached
            && lag.termination == Termination::HorizonReached,
        || format!("terminations {:?} / {:?}", support.termination, lag.termination),
    )?;
    ensure((lag.final_time() - 0.5).abs() < 1e-12, || "vertex run short".into())?;
    let d = support_curve_distance(support.last(), lag.last());
    ensure(d <= 1e-3, || format!("Hausdorff {d:e} > 1e-3"))?;
    let vs = sigma_field(&support, 0.5, &grid).map_err(e2s)?;
    let vl = sigma_field(&lag, 0.5, &grid).map_err(e2s)?;
    let dv = vs.iter().zip(&vl).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("runtime {elapsed:?}"))?;
    Ok(format!(
        "Hausdorff at t = 0.5: {d:.2e}, normal-speed gap {dv:.2e}, {elapsed:.2?}"
    ))
}

fn criterion_5() -> Verdict {
    let grid = AngleGrid::new(128).map_err(e2s)?;
    let cfg = FlowConfig::default().with_interval(0.02);
    let mut lines = Vec::new();
    let scenarios: [(&str, Vec<f64>, f64, Vec<f64>, f64, f64); 2] = [
        ("circle-in-circle", vec![2.0; 128], 0.5, vec![1.0; 128], 0.3, 1.0),
        ("ellipse-in-circle", vec![2.0; 128], -1.5, ellipse_support(1.2, 0.8, &grid), -1.5, 2.0),
    ];
    for (name, so, fo, si, fi, t_end) in scenarios {
        let c = FlowConfig { t_end, ..cfg.clone() };
        let (outer, _) = run_support_flow(&so, &vec![fo; 128], &c).map_err(e2s)?;
        let (inner, _) = run_support_flow(&si, &vec![fi; 128], &c).map_err(e2s)?;
        let rec = check_containment(&outer, &inner).map_err(e2s)?;
        // independent recomputation over shared snapshot times
        let scale = outer.first().s().iter().chain(inner.first().s()).fold(0.0f64, |a, s| a.max(s.abs()));
        let mut margin = f64::INFINITY;
        for o in &outer.snapshots {
            if let Some(i) = inner.at_time(o.t()) {
                let (a, b) = (o.absolute_support(), i.absolute_support());
                margin = a.iter().zip(&b).fold(margin, |m, (x, y)| m.min(x - y));
            }
        }
        ensure(margin >= -1e-6 * scale && rec.status == Status::Pass, || {
            format!("{name}: margin {margin:e}, monitor {rec:?}")
        })?;
        lines.push(format!("{name} min margin {margin:.3e}"));
    }
    Ok(lines.join(", "))
}

fn criterion_6() -> Verdict {
    let grid = AngleGrid::new(128).map_err(e2s)?;
    let circle = FlowConfig::default().with_interval(5e-4);
    let (traj, _) = run_support_flow(&[1.0; 128], &[-0.5; 128], &circle).map_err(e2s)?;
    let rep = check_length_identities(&traj).map_err(e2s)?;
    let r1c = rep.records[0].value;
    ensure(r1c <= 1e-6, || format!("circle residual1 {r1c:e} > 1e-6"))?;

    let ell = FlowConfig::default().with_interval(0.01);
    let (traj, _) =
        run_support_flow(&ellipse_support(1.5, 1.0, &grid), &[-0.8; 128], &ell).map_err(e2s)?;
    let rep = check_length_identities(&traj).map_err(e2s)?;
    let l_scale = length_series(&traj).into_iter().fold(0.0f64, |m, (_, l)| m.max(l));
    let (r1, r2) = (rep.records[0].value, rep.records[1].value);
    ensure(r1 <= 1e-3 * l_scale, || format!("ellipse residual1 {r1:e}"))?;
    ensure(r2 <= 1e-2 * l_scale, || format!("ellipse residual2 {r2:e}"))?;
    Ok(format!(
        "circle residual1 {r1c:.2e}; ellipse residual1 {r1:.2e} <= {:.2e}, residual2 {r2:.2e} <= {:.2e}",
        1e-3 * l_scale,
        1e-2 * l_scale
    ))
}

fn criterion_7() -> Verdict {
    let grid = AngleGrid::new(128).map_err(e2s)?;
    let horizon = 2.0;
    let cfg = FlowConfig { t_end: horizon, ..Default::default() }.with_interval(0.05);
    let (traj, _) =
        run_support_flow(&ellipse_support(1.5, 1.0, &grid), &[1.0; 128], &cfg).map_err(e2s)?;
    let inputs = OutcomeInputs::from_state(traj.first()).map_err(e2s)?;
    ensure(1.0 / inputs.zeta + inputs.f_min > 0.0, || "case (I) hypothesis fails".into())?;
    ensure(traj.termination == Termination::HorizonReached, || {
        format!("case (I) ended with {:?}", traj.termination)
    })?;
    let l = length_series(&traj);
    let second_half: Vec<_> = l.iter().filter(|(t, _)| *t >= 0.5 * horizon - 1e-12).collect();
    ensure(
        second_half.windows(2).all(|w| w[1].1 > w[0].1),
        || "case (I) length not strictly increasing".into(),
    )?;

    let mut notes = vec![format!("case I horizon reached, L {:.3} -> {:.3}", l[0].1, l.last().unwrap().1)];
    let cases = [("circle", vec![1.0; 128], -2.0), ("ellipse(1.2,1)", ellipse_support(1.2, 1.0, &grid), -2.0)];
    for (name, s0, f) in cases {
        let cfg = FlowConfig::default().with_interval(0.01);
        let (traj, _) = run_support_flow(&s0, &vec![f; 128], &cfg).map_err(e2s)?;
        let inputs = OutcomeInputs::from_state(traj.first()).map_err(e2s)?;
        let (d, fmax) = (inputs.delta, inputs.f_max);
        ensure(1.0 / d + fmax < 0.0, || format!("{name}: case (II) hypothesis fails"))?;
        let t_star = 0.5 * ((-1.0 + d * fmax) / (1.0 + d * fmax)).ln();
        let t_end = traj.termination.singular_time().ok_or_else(|| format!("{name}: no termination"))?;
        ensure(t_end < t_star + 1e-2, || format!("{name}: ended at {t_end} past T* = {t_star}"))?;
        // uniform part of the record; the terminal snapshot is off schedule
        let l: Vec<_> = length_series(&traj)
            .into_iter()
            .enumerate()
            .filter(|(i, (t, _))| (t - 0.01 * *i as f64).abs() < 1e-9)
            .map(|(_, p)| p)
            .collect();
        ensure(l.windows(2).all(|w| w[1].1 < w[0].1), || format!("{name}: L not decreasing"))?;
        let h = 0.01;
        let worst = l
            .windows(3)
            .map(|w| (w[2].1 - 2.0 * w[1].1 + w[0].1) / (h * h))
            .fold(f64::INFINITY, f64::min);
        ensure(worst > 0.0, || format!("{name}: min d2L/dt2 = {worst:e}"))?;
        notes.push(format!(
            "case II {name} {} at {t_end:.4} < T*+0.01 = {:.4}, min d2L/dt2 {worst:.3}",
            traj.termination.name(),
            t_star + 1e-2
        ));
    }
    Ok(notes.join("; "))
}

fn criterion_8() -> Verdict {
    let mut worst = [0.0f64; 4];
    for n in [2usize, 3, 5] {
        for r0 in [0.5, 1.0, 2.0] {
            for r1 in [-0.2, 0.0, 0.5] {
                for t in [0.0, 0.25, 0.5, 1.0] {
                    let fd = TimeDerivative::FiniteDifference(1e-4);
                    let v = [
                        residual_lemma_4_2(n, r0, r1, t, TimeDerivative::Exact),
                        residual_lemma_4_2(n, r0, r1, t, fd),
                        residual_lemma_4_5(n, r0, r1, t, TimeDerivative::Exact),
                        residual_lemma_4_5(n, r0, r1, t, fd),
                    ];
                    for (w, x) in worst.iter_mut().zip(v) {
                        *w = w.max(x.map_err(e2s)?);
                    }
                }
            }
        }
    }
    let mut simons: f64 = 0.0;
    for n in 2..=8 {
        for r in [0.25, 1.0, 3.7, 7.4, 20.0] {
            simons = simons.max(check_simons_sphere(n, r).map_err(e2s)?);
        }
    }
    ensure(worst[0] <= 1e-10 && worst[2] <= 1e-10, || format!("closed-form residuals {worst:?}"))?;
    ensure(worst[1] <= 1e-6 && worst[3] <= 1e-6, || format!("finite-difference residuals {worst:?}"))?;
    ensure(simons <= 1e-12, || format!("Simons residual {simons:e}"))?;
    Ok(format!(
        "4.2: {:.1e} / fd {:.1e}; 4.5: {:.1e} / fd {:.1e}; Simons {simons:.1e}",
        worst[0], worst[1], worst[2], worst[3]
    ))
}

fn criterion_9() -> Verdict {
    let forcing = |t: f64| 0.5 * t.sin();
    let mut count = 0;
    let mut worst: f64 = f64::INFINITY;
    for g in [
        RadialGeometry::Circle,
        RadialGeometry::Cylinder,
        RadialGeometry::SphereN { n: 2 },
        RadialGeometry::SphereN { n: 4 },
    ] {
        for (r0, r1) in [(1.0, 0.0), (1.0, 0.2), (0.5, -0.1), (2.0, 1.0)] {
            let rep = forced_radial(g, &forcing, -0.5, 0.5, r0, r1, 1e-3, 3.0).map_err(e2s)?;
            let tol = 1e-8 * rep.r_upper.iter().cloned().fold(0.0, f64::max);
            for k in 0..rep.times.len() {
                let m = (rep.r[k] - rep.r_lower[k]).min(rep.r_upper[k] - rep.r[k]);
                ensure(m >= -tol, || {
                    format!("{g:?} ({r0},{r1}) t={}: margin {m:e}", rep.times[k])
                })?;
                worst = worst.min(m);
                count += 1;
            }
        }
    }
    Ok(format!("{count} samples bracketed, min margin {worst:.2e}"))
}

fn criterion_10() -> Verdict {
    let mut notes = Vec::new();
    let runs: [(&str, Preset, f64, f64); 3] = [
        ("circle f=-1", Preset::Circle { r0: 1.0 }, -1.0, 1.0),
        ("ellipse(2,1) f=0.5", Preset::Ellipse { a: 2.0, b: 1.0 }, 0.5, 0.5),
        ("ellipse(1.5,1) f=-0.8", Preset::Ellipse { a: 1.5, b: 1.0 }, -0.8, 0.5),
    ];
    for (name, preset, f, t_end) in runs {
        let c0 = preset.curve(256, &Speed::Constant { c: f }).map_err(e2s)?;
        let cfg = FlowConfig { t_end, record_every: 1, ..Default::default() };
        let traj = run_lagrangian_flow(&c0, c0.sigma(), &cfg).map_err(e2s)?;
        let rec = check_normal_flow(&traj);
        ensure(rec.value <= 1e-6, || format!("{name}: {:e}", rec.value))?;
        notes.push(format!("{name} {:.1e} over {} steps", rec.value, traj.snapshots.len()));
    }
    Ok(notes.join(", "))
}

fn read_tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect()
}

fn criterion_11() -> Verdict {
    let suite: &[&[&str]] = &[
        &["radial", "--geometry", "sphere", "--n", "2", "--r0", "1", "--r1", "0", "--t-end", "2"],
        &["radial", "--geometry", "circle", "--r0", "1", "--r1", "-2"],
        &["radial", "--geometry", "cylinder", "--r0", "1", "--r1", "0.2", "--forcing", "0.3"],
        &["curve", "--preset", "circle", "--r0", "1", "--speed", "-1", "--t-end", "1"],
        &["curve", "--preset", "ellipse", "--a", "2", "--b", "1", "--speed", "0.5", "--t-end", "0.5", "--both-solvers"],
        &["curve", "--preset", "fourier", "--coeffs", "1,0,0.05", "--speed", "-1.2"],
        &["containment", "--outer", "circle:2", "--outer-speed", "-1.5", "--inner", "ellipse:1.2,0.8", "--inner-speed", "-1.5", "--t-end", "2"],
        &["verify", "all"],
    ];
    let bin = env!("CARGO_BIN_EXE_himcf");
    let root = tempfile::tempdir().map_err(e2s)?;
    let mut trees = Vec::new();
    for pass in 0..2 {
        let mut outputs = BTreeMap::new();
        for (i, args) in suite.iter().enumerate() {
            let dir = root.path().join(format!("pass{pass}/{i}"));
            let out = Command::new(bin)
                .args(*args)
                .arg("--out-dir")
                .arg(&dir)
                .output()
                .map_err(e2s)?;
            ensure(out.status.success(), || {
                format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
            })?;
            outputs.insert(format!("{i}/stdout"), out.stdout);
            for (name, bytes) in read_tree(&dir) {
                outputs.insert(format!("{i}/{name}"), bytes);
            }
        }
        trees.push(outputs);
    }
    ensure(trees[0].keys().eq(trees[1].keys()), || "file sets differ".into())?;
    for (k, v) in &trees[0] {
        ensure(&trees[1][k] == v, || format!("{k} differs between runs"))?;
    }
    let bytes: usize = trees[0].values().map(Vec::len).sum();
    Ok(format!("{} scenarios, {} artifacts ({bytes} bytes) identical across two runs", suite.len(), trees[0].len()))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 11] = [
        ("radial closed form", criterion_1),
        ("regime classification", criterion_2),
        ("circle support flow", criterion_3),
        ("cross-solver equivalence", criterion_4),
        ("containment", criterion_5),
        ("length identities", criterion_6),
        ("long-time and finite-time outcomes", criterion_7),
        ("sphere identity residuals", criterion_8),
        ("forced-flow bracketing", criterion_9),
        ("normal flow", criterion_10),
        ("determinism", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
