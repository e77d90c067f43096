use himcf::flow::{run_support_flow, FlowConfig};
use himcf::geometry::AngleGrid;
use himcf::monitors::{curvature_evolution_residual, KttCoefficient, KTT_COEFFICIENT};

fn main() -> himcf::Result<()> {
    let grid = AngleGrid::new(64)?;
    let s0 = grid.sample(|t| 0.5 + 0.05 * (2.0 * t).cos());
    let v0 = grid.sample(|t| -0.3 + 0.05 * t.cos() + 0.04 * (3.0 * t).sin());
    let cfg = FlowConfig { n: 64, t_end: 0.05, ..Default::default() }.with_interval(1e-3);
    let (traj, _) = run_support_flow(&s0, &v0, &cfg)?;
    for coeff in [KTT_COEFFICIENT, KttCoefficient { c: 2.0, p: 3 }, KttCoefficient { c: 3.0, p: 1 }] {
        let rec = curvature_evolution_residual(&traj, coeff, 1e-4)?;
        println!("-{}·k_θ²/k^{}: relative residual {:.3e} ({:?})", coeff.c, coeff.p, rec.value, rec.status);
    }
    Ok(())
}
