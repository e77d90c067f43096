//! Checks `dL/dt = ∫σ̃ dθ` and `d²L/dt² = ∫(k σ̃_θ² + 1/k) dθ` along support
//! runs, and shows the second-order convergence of the first residual.

use himcf::flow::{run_support_flow, FlowConfig};
use himcf::geometry::AngleGrid;
use himcf::monitors::check_length_identities;

fn main() -> himcf::Result<()> {
    for h in [0.04, 0.02, 0.01] {
        let cfg = FlowConfig::default().with_interval(h);
        let (traj, _) = run_support_flow(&[1.0; 128], &[-0.5; 128], &cfg)?;
        let rep = check_length_identities(&traj)?;
        println!("circle, spacing {h}: residual1 {:.3e}", rep.records[0].value);
    }

    let grid = AngleGrid::new(128)?;
    let s0 = grid.sample(|t| (2.25 * t.cos().powi(2) + t.sin().powi(2)).sqrt());
    let (traj, _) = run_support_flow(&s0, &[-0.8; 128], &FlowConfig::default().with_interval(0.01))?;
    for r in check_length_identities(&traj)?.records {
        println!("ellipse(1.5, 1): {} = {:.3e} (tolerance {:.3e}, {:?})", r.name, r.value, r.tolerance, r.status);
    }
    Ok(())
}
