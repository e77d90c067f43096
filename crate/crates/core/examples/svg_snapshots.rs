//! Runs a curve scenario through the same path as `himcf curve` and writes
//! its CSV, SVG and summary into a directory.
//!
//! ```text
//! cargo run --example svg_snapshots -- out/
//! ```

use std::path::PathBuf;

use himcf::flow::FlowConfig;
use himcf::scenario::{cmd_curve, CurveSpec, Preset, Speed};

fn main() -> himcf::Result<()> {
    let dir: PathBuf = std::env::args().nth(1).unwrap_or_else(|| "himcf-out".into()).into();
    let spec = CurveSpec {
        preset: Preset::Fourier { cos: vec![1.0, 0.0, 0.08], sin: vec![0.0, 0.0, 0.03] },
        speed: Speed::Constant { c: 0.4 },
        flow: FlowConfig { t_end: 1.0, ..Default::default() },
        both_solvers: true,
        vertices: 256,
    };
    let out = cmd_curve(&spec)?;
    out.write_to(&dir)?;
    for name in out.files.keys() {
        println!("wrote {}", dir.join(name).display());
    }
    println!("{}", out.summary_json()?);
    Ok(())
}
