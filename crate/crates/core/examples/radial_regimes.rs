//! Classifies radially symmetric solutions and checks the integrator
//! against the closed form.
//!
//! ```text
//! cargo run --example radial_regimes
//! ```

use himcf::radial::{classify_regime, closed_form_radius, integrate_radial_ode, RadialGeometry};

fn main() -> himcf::Result<()> {
    let cases = [
        (RadialGeometry::sphere(2)?, 1.0, 0.0),
        (RadialGeometry::sphere(3)?, 1.0, -0.4),
        (RadialGeometry::Circle, 1.0, -1.0),
        (RadialGeometry::Circle, 1.0, -2.0),
        (RadialGeometry::Cylinder, 1.0, -2.0),
    ];
    println!("{:<22} {:>5} {:>5}  {:<30} {:>10} {:>10}", "geometry", "r0", "r1", "regime", "T_max", "max err");
    for (g, r0, r1) in cases {
        let report = classify_regime(g, r0, r1)?;
        let t_end = report.t_max.map_or(2.0, |t| (0.9 * t).min(2.0));
        let traj = integrate_radial_ode(g, r0, r1, 1e-3, t_end)?;
        let err = traj
            .samples
            .iter()
            .map(|s| (s.r - closed_form_radius(g, r0, r1, s.t)).abs())
            .fold(0.0, f64::max);
        let t_max = report.t_max.map_or("-".to_string(), |t| format!("{t:.6}"));
        println!(
            "{:<22} {r0:>5} {r1:>5}  {:<30} {t_max:>10} {err:>10.2e}",
            format!("{g:?}"),
            format!("{:?}", report.regime)
        );
        for flag in &report.flags {
            println!("  note: {flag}");
        }
    }
    Ok(())
}
