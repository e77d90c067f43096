//! Runs the support-function solver and the vertex solver on the same
//! expanding ellipse and compares curves and normal speeds over time.

use himcf::flow::{run_lagrangian_flow, run_support_flow, sigma_field, support_curve_distance, FlowConfig};
use himcf::geometry::AngleGrid;
use himcf::scenario::{Preset, Speed};

fn main() -> himcf::Result<()> {
    let preset = Preset::Ellipse { a: 2.0, b: 1.0 };
    let speed = Speed::Constant { c: 0.5 };
    let cfg = FlowConfig { t_end: 0.5, ..Default::default() }.with_interval(0.05);
    let grid = AngleGrid::new(cfg.n)?;

    let s0 = preset.state(&grid, &speed)?;
    let (support, _) = run_support_flow(s0.s(), s0.v(), &cfg)?;
    let c0 = preset.curve(256, &speed)?;
    let vertices = run_lagrangian_flow(&c0, c0.sigma(), &cfg)?;
    println!("support steps {}, vertex steps {}", support.steps, vertices.steps);

    println!("{:>6} {:>12} {:>12}", "t", "hausdorff", "speed gap");
    for s in &support.snapshots {
        let Some(c) = vertices.at_time(s.t()) else { continue };
        let a = sigma_field(&support, s.t(), &grid)?;
        let b = sigma_field(&vertices, s.t(), &grid)?;
        let gap = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        println!("{:>6.2} {:>12.3e} {gap:>12.3e}", s.t(), support_curve_distance(s, c));
    }
    Ok(())
}
