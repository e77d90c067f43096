use himcf::flow::{run_support_flow, FlowConfig};

fn main() -> himcf::Result<()> {
    let cfg = FlowConfig::default().with_interval(0.25);
    let (traj, report) = run_support_flow(&[1.0; 128], &[-1.0; 128], &cfg)?;
    println!("S0 = 1, V0 = -1: r(t) = e^-t");
    for s in &traj.snapshots {
        let err = s.s().iter().map(|x| (x - (-s.t()).exp()).abs()).fold(0.0, f64::max);
        println!("  t = {:.2}  S = {:.9}  max error {err:.2e}", s.t(), s.s()[0]);
    }
    for r in &report.records {
        println!("  {}: {:.3e} ({:?})", r.name, r.value, r.status);
    }

    let (traj, _) = run_support_flow(&[1.0; 128], &[-2.0; 128], &FlowConfig::default())?;
    println!(
        "S0 = 1, V0 = -2: {} at t = {:.6} after {} steps (closed form {:.6})",
        traj.termination.name(),
        traj.termination.singular_time().unwrap_or(f64::NAN),
        traj.steps,
        0.5 * 3f64.ln()
    );
    Ok(())
}
