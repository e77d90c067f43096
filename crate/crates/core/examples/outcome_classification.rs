use himcf::flow::{run_support_flow, FlowConfig};
use himcf::geometry::AngleGrid;
use himcf::monitors::{classify_outcome, OutcomeInputs};
use himcf::scenario::{Preset, Speed};

fn main() -> himcf::Result<()> {
    let grid = AngleGrid::new(128)?;
    let cases = [
        (Preset::Circle { r0: 1.0 }, -2.0),
        (Preset::Circle { r0: 1.0 }, -0.5),
        (Preset::Ellipse { a: 1.5, b: 1.0 }, 1.0),
        (Preset::Ellipse { a: 1.2, b: 1.0 }, -2.0),
        (Preset::Fourier { cos: vec![1.0, 0.0, 0.05], sin: vec![] }, -1.2),
    ];
    for (preset, f) in cases {
        let s0 = preset.state(&grid, &Speed::Constant { c: f })?;
        let cfg = FlowConfig { t_end: 2.0, ..Default::default() };
        let (traj, _) = run_support_flow(s0.s(), s0.v(), &cfg)?;
        let inputs = OutcomeInputs::from_state(traj.first())?;
        let out = classify_outcome(&traj, &inputs);
        println!(
            "{preset:?}, f = {f}: predicted {:?}, observed {} at {:.4}, label {}, agrees {}",
            out.prediction,
            traj.termination.name(),
            traj.final_time(),
            out.label,
            out.agrees
        );
    }
    Ok(())
}
