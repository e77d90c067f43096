use himcf::flow::{run_support_flow, FlowConfig};
use himcf::geometry::AngleGrid;
use himcf::monitors::check_containment;
use himcf::scenario::{Preset, Speed};

fn run(
    preset: Preset,
    f: f64,
    cfg: &FlowConfig,
) -> himcf::Result<himcf::flow::FlowTrajectory<himcf::geometry::SupportState>> {
    let grid = AngleGrid::new(cfg.n)?;
    let s0 = preset.state(&grid, &Speed::Constant { c: f })?;
    Ok(run_support_flow(s0.s(), s0.v(), cfg)?.0)
}

fn main() -> himcf::Result<()> {
    let cfg = FlowConfig::default().with_interval(0.02);
    let outer = run(Preset::Circle { r0: 2.0 }, 0.5, &cfg)?;
    let inner = run(Preset::Circle { r0: 1.0 }, 0.3, &cfg)?;
    let rec = check_containment(&outer, &inner)?;
    println!("circle in circle:  margin {:.4} at t = {:?} ({:?})", rec.value, rec.t, rec.status);

    let cfg = FlowConfig { t_end: 2.0, ..cfg };
    let outer = run(Preset::Circle { r0: 2.0 }, -1.5, &cfg)?;
    let inner = run(Preset::Ellipse { a: 1.2, b: 0.8 }, -1.5, &cfg)?;
    let rec = check_containment(&outer, &inner)?;
    println!(
        "ellipse in circle: margin {:.4} ({:?}); outer {} at {:.3}, inner {} at {:.3}",
        rec.value,
        rec.status,
        outer.termination.name(),
        outer.final_time(),
        inner.termination.name(),
        inner.final_time()
    );
    Ok(())
}
